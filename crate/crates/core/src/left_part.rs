//! The left part of a module category, its support algebra, and local
//! extensions of hereditary algebras.

use std::sync::Arc;

use serde::Serialize;

use crate::algebra::{FDAlgebra, VertexSet};
use crate::catalog::{IndecompCatalog, SubcategorySpec};
use crate::error::{Error, Result};
use crate::linalg::Subspace;
use crate::module::{decompose, hom_space, is_injective, off_corner_bimodule, trace, RightModule};
use crate::torsion::{prop23_conditions, Caps, Prop23Report, Verdict};

#[derive(Clone, Debug)]
pub struct LeftPartReport {
    pub members: SubcategorySpec,
    /// Projective dimension of every catalog entry, `None` above the cap.
    pub pd: Vec<Option<usize>>,
    pub support: VertexSet,
    pub left_support: Option<Arc<FDAlgebra>>,
    pub prop23: Prop23Report,
    pub complete: bool,
}

impl LeftPartReport {
    /// Condition (1), reported with its witness.
    pub fn abelian_exact(&self) -> &Verdict {
        &self.prop23.conditions[0]
    }
}

/// `L_A`: entries all of whose predecessors have projective dimension at
/// most one.
pub fn left_part(catalog: &IndecompCatalog, caps: &Caps) -> LeftPartReport {
    let n = catalog.len();
    let small: Vec<bool> = catalog
        .entries()
        .iter()
        .map(|x| x.pd_at_most_one())
        .collect();
    let members = SubcategorySpec::new(
        (0..n).filter(|&x| (0..n).all(|y| !catalog.reaches(y, x) || small[y])),
    );
    let pd = catalog
        .entries()
        .iter()
        .map(|x| x.pd_up_to(caps.pd_cap))
        .collect();
    let (support, _) = catalog.supporting_projective(&members);
    let left_support = left_support(catalog.algebra(), support);
    let prop23 = prop23_conditions(catalog, &members, catalog.max_dim(), caps);
    LeftPartReport {
        members,
        pd,
        support,
        left_support,
        prop23,
        complete: catalog.is_complete(),
    }
}

/// The corner algebra at the vertices of the projectives in `L_A`.
pub fn left_support(a: &FDAlgebra, support: VertexSet) -> Option<Arc<FDAlgebra>> {
    if support.is_empty() {
        None
    } else {
        Some(Arc::new(a.corner(support).expect("nonempty support")))
    }
}

/// `J(A)` is projective as a right module.
pub fn is_hereditary(a: &Arc<FDAlgebra>) -> bool {
    let reg = RightModule::regular(a);
    let rad = Subspace::span(
        a.field(),
        a.dim(),
        &a.radical_indices()
            .iter()
            .map(|&r| a.basis_vector(r))
            .collect::<Vec<_>>(),
    );
    reg.submodule(&rad).0.is_projective()
}

#[derive(Clone, Debug, Serialize)]
pub struct Cor32Report {
    pub hypothesis: bool,
    pub left_support_hereditary: Verdict,
    pub right_approximations: Verdict,
    pub acyclic_case: Verdict,
}

impl Cor32Report {
    pub fn passes(&self) -> bool {
        !self.left_support_hereditary.is_fail()
            && !self.right_approximations.is_fail()
            && !self.acyclic_case.is_fail()
    }
}

pub fn cor32_checks(
    catalog: &IndecompCatalog,
    report: &LeftPartReport,
    caps: &Caps,
) -> Cor32Report {
    let hypothesis = report.prop23.abelian_exact();
    let vacuous = || Verdict::Pass;
    if !hypothesis {
        return Cor32Report {
            hypothesis,
            left_support_hereditary: vacuous(),
            right_approximations: vacuous(),
            acyclic_case: vacuous(),
        };
    }
    let a = catalog.algebra();
    let left_support_hereditary = match &report.left_support {
        None => Verdict::Pass,
        Some(b) if is_hereditary(b) => Verdict::Pass,
        Some(_) => Verdict::Fail("left support is not hereditary".into()),
    };

    // trace(P_l, X) -> X is a right approximation by add(L_A).
    let (_, p) = catalog.supporting_projective(&report.members);
    let mut right_approximations = Verdict::Pass;
    'entries: for (i, x) in catalog.entries().iter().enumerate() {
        let t = trace(&p, x);
        let (sub, _) = x.submodule(&t);
        match decompose(&sub, caps.enum_cap) {
            Err(e) => {
                right_approximations = Verdict::Inconclusive(e.to_string());
                break;
            }
            Ok(parts) => {
                if let Some(bad) = parts.iter().find(|q| {
                    !catalog
                        .identify(q)
                        .is_some_and(|k| report.members.contains(k))
                }) {
                    right_approximations = Verdict::Fail(format!(
                        "trace in {} has a summand {:?} outside L_A",
                        catalog.label(i),
                        bad.dimension_vector()
                    ));
                    break;
                }
            }
        }
        for &d in &report.members.indices {
            for g in hom_space(catalog.entry(d), x) {
                if !t.contains_space(&g.row_space()) {
                    right_approximations = Verdict::Fail(format!(
                        "a map {} -> {} does not factor through the trace",
                        catalog.label(d),
                        catalog.label(i)
                    ));
                    break 'entries;
                }
            }
        }
    }

    let acyclic_case = if a.ext_quiver().has_oriented_cycle() {
        Verdict::Pass
    } else if !is_hereditary(a) {
        Verdict::Fail("acyclic quiver but A is not hereditary".into())
    } else if report.support != a.all_vertices() {
        Verdict::Fail("acyclic quiver but the left support is a proper corner".into())
    } else {
        Verdict::Pass
    };
    Cor32Report {
        hypothesis,
        left_support_hereditary,
        right_approximations,
        acyclic_case,
    }
}

#[derive(Clone, Debug)]
pub struct LocalExtensionShape {
    pub h_vertices: VertexSet,
    pub y: usize,
    pub dim_r: usize,
    pub h: Arc<FDAlgebra>,
    /// `e_y A e_H` as a right `H`-module.
    pub m_h: RightModule,
    pub h_hereditary: bool,
}

/// A vertex `y` such that no path runs from the rest into `y`, the corner
/// on the rest is hereditary, and `e_y A e_y` is local but not a field.
/// Present only when exactly one vertex qualifies.
pub fn detect_local_extension(a: &FDAlgebra) -> Option<LocalExtensionShape> {
    let n = a.vertex_count();
    if n < 2 {
        return None;
    }
    let mut found = Vec::new();
    for y in 0..n {
        let hv = VertexSet::from_indices([y]).complement(n);
        if a.forbidden_corner_dim(hv) != 0 {
            continue;
        }
        let dim_r = a.peirce_dim(VertexSet::from_indices([y]), VertexSet::from_indices([y]));
        if dim_r <= 1 {
            continue;
        }
        let h = Arc::new(a.corner(hv).expect("nonempty"));
        if !is_hereditary(&h) {
            continue;
        }
        found.push((y, hv, dim_r, h));
    }
    if found.len() != 1 {
        return None;
    }
    let (y, hv, dim_r, h) = found.pop().unwrap();
    let m_h = off_corner_bimodule(a, hv, &h);
    Some(LocalExtensionShape {
        h_vertices: hv,
        y,
        dim_r,
        h,
        m_h,
        h_hereditary: true,
    })
}

#[derive(Clone, Debug, Serialize)]
pub struct Prop35Report {
    /// `add(L_A)` abelian exact.
    pub left_part_abelian_exact: bool,
    /// `L_A` is exactly the entries supported on `H`.
    pub left_part_is_ind_h: bool,
    pub m_h_injective: bool,
}

impl Prop35Report {
    pub fn agree(&self) -> bool {
        self.left_part_abelian_exact == self.left_part_is_ind_h
            && self.left_part_is_ind_h == self.m_h_injective
    }
}

pub fn prop35_check(catalog: &IndecompCatalog, report: &LeftPartReport) -> Result<Prop35Report> {
    let shape = detect_local_extension(catalog.algebra()).ok_or(Error::NotLocalExtension)?;
    Ok(Prop35Report {
        left_part_abelian_exact: report.prop23.abelian_exact(),
        left_part_is_ind_h: report.members == catalog.supported_in(shape.h_vertices),
        m_h_injective: is_injective(&shape.m_h),
    })
}
