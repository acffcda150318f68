use std::fs;

use herbrand::corpus::{model_path, model_text, models, proof_path, proof_text};
use herbrand::script::parse_script;
use herbrand::structure::parse_structure;
use herbrand_core::proof::{check_proof, metastability_script};
use herbrand_core::script::expand;

fn bless() -> bool {
    std::env::var_os("HERBRAND_BLESS").is_some()
}

fn sync(path: &std::path::Path, want: &str) {
    if bless() {
        fs::create_dir_all(path.parent().unwrap()).unwrap();
        fs::write(path, want).unwrap();
    }
    let have = fs::read_to_string(path).unwrap_or_else(|e| panic!("{}: {} (run with HERBRAND_BLESS=1)", path.display(), e));
    assert_eq!(have, want, "{} is out of date (run with HERBRAND_BLESS=1)", path.display());
}

#[test]
fn proof_file_matches_generator() {
    sync(&proof_path(), &proof_text());
    let parsed = parse_script(&fs::read_to_string(proof_path()).unwrap()).unwrap();
    let built = metastability_script().unwrap();
    assert_eq!(parsed.steps, built.steps);
    assert_eq!(parsed.gamma, built.gamma);
    assert_eq!(parsed.theory, built.theory);
    let a = expand(&parsed).unwrap().proof;
    let b = expand(&built).unwrap().proof;
    assert_eq!(a.steps, b.steps);
    check_proof(a).unwrap();
}

#[test]
fn model_files_match_generator() {
    for m in models() {
        let path = model_path(&m.file);
        sync(&path, &model_text(&m));
        let parsed = parse_structure(&fs::read_to_string(&path).unwrap()).unwrap();
        assert_eq!(parsed, m.spec, "{}", m.file);
    }
}
