//! The algebras shipped in `fixtures/`, compiled in.

use std::sync::Arc;

use crate::algebra::{build_algebra, FDAlgebra};
use crate::spec_file::parse_spec;

pub const E1_TEXT: &str = include_str!("../../../fixtures/e1.alg");
pub const E2_TEXT: &str = include_str!("../../../fixtures/e2.alg");
pub const E2_MOD_TEXT: &str = include_str!("../../../fixtures/e2-mod.alg");
pub const ONE_VERTEX_TEXT: &str = include_str!("../../../fixtures/one-vertex.alg");
pub const A2_TEXT: &str = include_str!("../../../fixtures/a2.alg");

pub fn load(text: &str) -> Arc<FDAlgebra> {
    build_algebra(&parse_spec(text).expect("fixture parses")).expect("fixture builds")
}

/// Radical square zero algebra: `a: 2->1`, `b: 3->1`, `g: 3->2`, `g.a = 0`.
pub fn e1() -> Arc<FDAlgebra> {
    load(E1_TEXT)
}

/// `a: 2->1`, `b: 3->2`, loop `g` at 3, `g.g = 0`, `g.b.a = 0`.
pub fn e2() -> Arc<FDAlgebra> {
    load(E2_TEXT)
}

pub fn e2_modified() -> Arc<FDAlgebra> {
    load(E2_MOD_TEXT)
}

pub fn one_vertex() -> Arc<FDAlgebra> {
    load(ONE_VERTEX_TEXT)
}

/// Path algebra of `1 <- 2`.
pub fn a2() -> Arc<FDAlgebra> {
    load(A2_TEXT)
}
