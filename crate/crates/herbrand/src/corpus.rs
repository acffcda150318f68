//! The bundled corpus: the metastability proof script and its structures.
//! Files under `corpus/` are generated from the definitions here and kept in
//! sync by a test (`HERBRAND_BLESS=1` rewrites them).

use std::path::PathBuf;

use herbrand_core::example::metastability_spec;
use herbrand_core::proof::metastability_script;
use herbrand_core::semantics::{CmpOp, Cond, Expr, StructureSpec};

use crate::script::write_script;

pub const PROOF_FILE: &str = "metastability.proof";

pub fn corpus_dir() -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("corpus")
}

pub fn proof_path() -> PathBuf {
    corpus_dir().join(PROOF_FILE)
}

pub fn model_path(file: &str) -> PathBuf {
    corpus_dir().join("models").join(file)
}

pub fn proof_text() -> String {
    let s = metastability_script().expect("the corpus script expands");
    format!(
        "; Metastability: from the chaining sentence and the bound P(0,t,S k),\n\
         ; derive (exists m (P m (g m) 1)) by induction on (exists y (not (P 0 y (S x)))).\n{}",
        write_script(&s)
    )
}

fn e(src: &str) -> Expr {
    crate::structure::parse_expr(&crate::sexp::read_one(src).expect("expression")).expect("expression")
}

/// A bundled structure: file name, the value of `k`, and its definition.
pub struct Model {
    pub file: String,
    pub k: u64,
    pub spec: StructureSpec,
}

/// `g(n) = n+1` and `a_n = 1/(n+1)` for each `k`, then variants at `k = 2`
/// differing in `g`, `a` and the definition of `P`.
pub fn models() -> Vec<Model> {
    let mut out: Vec<Model> = [0u64, 1, 2, 3, 5, 8]
        .into_iter()
        .map(|k| Model { file: format!("k{}.model", k), k, spec: metastability_spec(k, e("(+ n 1)"), e("(/ 1 (+ n 1))")) })
        .collect();
    for (file, g, a) in [
        ("k2-g-plus2.model", "(+ n 2)", "(/ 1 (+ n 1))"),
        ("k2-g-double.model", "(+ (* 2 n) 1)", "(/ 1 (* (+ n 1) (+ n 1)))"),
        ("k2-g-plus3.model", "(+ n 3)", "(/ 2 (+ n 2))"),
    ] {
        out.push(Model { file: file.into(), k: 2, spec: metastability_spec(2, e(g), e(a)) });
    }
    let mut scaled = metastability_spec(2, e("(+ (* 3 n) 2)"), e("(/ 1 (+ n 3))"));
    scaled.rels[0].2 = Cond::Cmp(CmpOp::Le, e("(* (+ k 1) (- (a v) (a w)))"), e("l"));
    out.push(Model { file: "k2-scaled.model".into(), k: 2, spec: scaled });
    out
}

pub fn model_text(m: &Model) -> String {
    m.spec.to_string()
}
