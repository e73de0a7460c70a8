//! Rank-one compactifications of SL2 / PSL2: the four smooth cases, their
//! one-parameter torus embeddings, base change to the small torus, the action
//! of the nontrivial Weyl element and the G-equivariant presentations.

use num_bigint::BigInt;
use num_traits::One;
use serde_json::{json, Value};

use crate::error::{Error, Result};
use crate::fan::{Fan, Surface};
use crate::gkm::{self, Automorphism, GkmGraph, PiecewiseClass, Window};
use crate::linalg::{self, IntMatrix};
use crate::report::Report;
use crate::toric::{self, RsPresentation};
use crate::IntPoly;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct RankOneCase {
    pub surface: Surface,
}

impl RankOneCase {
    pub fn new(surface: Surface) -> Self {
        Self { surface }
    }

    pub fn parse(name: &str, n: Option<u32>) -> Result<Self> {
        Surface::parse(name, n).map(Self::new)
    }

    pub fn fan(&self) -> Fan {
        Fan::surface_catalog(self.surface)
    }

    /// Restriction of characters from the big torus to the one-parameter
    /// torus, as a one-row matrix.
    pub fn iota_dual(&self) -> IntMatrix {
        match self.surface {
            Surface::P1 => vec![vec![1]],
            Surface::P2 => vec![vec![1, -1]],
            Surface::P1xP1 => vec![vec![1, 1]],
            Surface::Fn(n) => vec![vec![1, n as i64]],
        }
    }

    pub fn toric_graph(&self) -> GkmGraph {
        toric::gkm_from_fan(&self.fan()).expect("catalog fans are smooth and complete")
    }

    /// The GKM graph for the one-parameter torus.
    pub fn small_graph(&self) -> GkmGraph {
        base_change(&self.toric_graph(), &self.iota_dual()).expect("catalog restriction is surjective").0
    }

    /// The nontrivial Weyl element: vertex pattern of the fixed-point action
    /// and inversion on the one-parameter character lattice.
    pub fn w0_action(&self) -> Automorphism {
        let perm = match self.surface {
            Surface::P1 => vec![1, 0],
            // vertices s12, s23, s13
            Surface::P2 => vec![0, 2, 1],
            // vertices s12, s23, s34, s14
            Surface::P1xP1 | Surface::Fn(_) => vec![2, 1, 0, 3],
        };
        Automorphism { perm, mat: vec![vec![-1]] }
    }

    /// Quotient of the small-torus graph by the vertex pattern of `w0`.
    pub fn g_equivariant_presentation(&self) -> GkmGraph {
        let w0 = self.w0_action();
        gkm::orbit_quotient(&self.small_graph(), &[&w0.perm]).expect("w0 is a permutation")
    }

    /// Whether `w0` is a graph automorphism, and the window ranks of the
    /// invariants and of the quotient presentation for each bound.
    pub fn g_equivariant_report(&self, bounds: &[i64]) -> Result<Report> {
        let g = self.small_graph();
        let w0 = self.w0_action();
        let q = self.g_equivariant_presentation();
        let mut rep = Report::new(format!("G-equivariant presentation of {}", self.surface.name()));
        let auto = g.validate_automorphism(&w0);
        rep.push(
            "w0 is a graph automorphism",
            auto.is_ok(),
            auto.err().map(|e| e.to_string()).unwrap_or_default(),
        );
        for &b in bounds {
            let window = Window::closed_cube(1, b, &[w0.mat.clone()]);
            let quotient = gkm::invariant_rank_in_window(&q, &[], &window)?;
            let (ok, detail) = match gkm::invariant_rank_in_window(&g, &[w0.clone()], &window) {
                Ok(inv) => (inv == quotient, format!("invariants {inv}, quotient members {quotient}")),
                Err(e) => (false, format!("invariants unavailable ({e}), quotient members {quotient}")),
            };
            rep.push(format!("window ranks agree at B = {b}"), ok, detail);
        }
        Ok(rep)
    }

    /// Reisner–Stanley data of the big torus plus the relation coming from the
    /// kernel of the restriction.
    pub fn rs_small(&self) -> RsSmall {
        let rs = toric::rs_presentation(&self.fan()).expect("catalog fan");
        let a = self.iota_dual();
        let extra = kernel_character(&a[0]).map(|k| {
            let e = rs.character_as_monomial(&k);
            match e.iter().find(|&&x| x != 0) {
                Some(&x) if x < 0 => e.iter().map(|v| -v).collect(),
                _ => e,
            }
        });
        let graph = self.small_graph();
        let images = rs
            .images
            .iter()
            .map(|f| restrict_class(f, &a))
            .collect();
        RsSmall { rs, graph, images, extra }
    }
}

/// The small-torus Reisner–Stanley description.
#[derive(Clone, Debug)]
pub struct RsSmall {
    pub rs: RsPresentation,
    pub graph: GkmGraph,
    /// Generator images restricted to the one-parameter torus.
    pub images: Vec<PiecewiseClass>,
    /// Exponents `e` of the extra relation `prod x_rho^e_rho = 1`.
    pub extra: Option<Vec<i64>>,
}

impl RsSmall {
    pub fn relation_text(e: &[i64]) -> String {
        let parts: Vec<String> = e
            .iter()
            .enumerate()
            .filter(|(_, &x)| x != 0)
            .map(|(i, &x)| if x == 1 { format!("x{}", i + 1) } else { format!("x{}^{}", i + 1, x) })
            .collect();
        format!("{} = 1", parts.join("*"))
    }

    pub fn to_json(&self) -> Value {
        json!({
            "generators": self.images.iter().enumerate().map(|(i, f)| json!({"ray": i + 1, "image": f.to_json()})).collect::<Vec<_>>(),
            "relation_subsets": self.rs.relation_subsets.iter().map(|s| s.iter().map(|i| i + 1).collect::<Vec<_>>()).collect::<Vec<_>>(),
            "extra_relation": self.extra.as_ref().map(|e| json!({"exponents": e, "text": Self::relation_text(e)})),
        })
    }
}

/// A primitive generator of the kernel of a one-row map, if it is nonzero.
fn kernel_character(row: &[i64]) -> Option<Vec<i64>> {
    linalg::integer_kernel_small(&vec![row.to_vec()], row.len()).into_iter().next()
}

pub fn restrict_class(f: &PiecewiseClass, a: &IntMatrix) -> PiecewiseClass {
    PiecewiseClass::new(f.values.iter().map(|p| p.apply_lattice_map(a).expect("restriction width")).collect())
}

/// Relabel every congruence along the character map `a`: `(chi, n)` becomes
/// the primitive part of `a (n chi)`. Cells are expanded into their clauses.
/// Congruences whose label maps to zero are dropped and returned as warnings.
pub fn base_change(g: &GkmGraph, a: &IntMatrix) -> Result<(GkmGraph, Vec<String>)> {
    if a.iter().any(|r| r.len() != g.rank()) || a.is_empty() {
        return Err(Error::Dimension("restriction map must have one column per character coordinate".into()));
    }
    let big: Vec<Vec<BigInt>> = a.iter().map(|r| r.iter().map(|&x| BigInt::from(x)).collect()).collect();
    let d = linalg::elementary_divisors(&big, g.rank());
    if d.len() != a.len() || !d.iter().all(One::is_one) {
        return Err(Error::NotSurjective);
    }
    let mut out = GkmGraph::new(a.len(), g.vertices().to_vec())?;
    let mut warnings = Vec::new();
    for c in g.constraints() {
        let img: Vec<i64> = linalg::mat_vec(a, &c.chi).iter().map(|x| x * c.n).collect();
        if img.iter().all(|&x| x == 0) {
            warnings.push(format!(
                "congruence {}-{} degenerates: its character restricts to zero",
                g.vertices()[c.u],
                g.vertices()[c.v]
            ));
            continue;
        }
        let (chi, n) = crate::charlat::normalize_congruence(&img, 1)?;
        let dup = out.edges().iter().any(|e| {
            e.u.min(e.v) == c.u.min(c.v) && e.u.max(e.v) == c.u.max(c.v) && e.chi == chi && e.n == n
        });
        if !dup {
            out.add_edge(c.u, c.v, &chi, n)?;
        }
    }
    Ok((out, warnings))
}

/// Check that every restricted generator is a member and that the extra
/// relation holds identically on the restricted images.
pub fn verify_rs_small(case: &RankOneCase) -> Result<Report> {
    let s = case.rs_small();
    let mut rep = Report::new(format!("small-torus Reisner-Stanley data of {}", case.surface.name()));
    for (i, f) in s.images.iter().enumerate() {
        let v = f.is_member(&s.graph)?;
        rep.push(format!("restricted x{} is a member", i + 1), v.member, "");
    }
    if let Some(e) = &s.extra {
        let lhs = restrict_class(&s.rs.monomial_class(e), &case.iota_dual());
        let one = PiecewiseClass::new(vec![IntPoly::one(1); s.graph.num_vertices()]);
        rep.push(format!("extra relation {}", RsSmall::relation_text(e)), lhs == one, "");
    }
    Ok(rep)
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::collections::BTreeSet;

    fn cases() -> Vec<RankOneCase> {
        let mut v = vec![Surface::P1, Surface::P2, Surface::P1xP1];
        v.extend((1..=4).map(Surface::Fn));
        v.into_iter().map(RankOneCase::new).collect()
    }

    /// Congruences `(a, b, n)` (rank one, chi = t) implied by a list through
    /// divisibility of moduli and transitivity.
    fn implied(vertices: usize, edges: &[(usize, usize, i64)]) -> BTreeSet<(usize, usize, i64)> {
        let moduli: BTreeSet<i64> = edges.iter().map(|e| e.2).collect();
        let mut out = BTreeSet::new();
        for &n in &moduli {
            let perms: Vec<Vec<usize>> = edges
                .iter()
                .filter(|e| e.2 % n == 0)
                .map(|e| {
                    let mut p: Vec<usize> = (0..vertices).collect();
                    p.swap(e.0, e.1);
                    p
                })
                .collect();
            let refs: Vec<&[usize]> = perms.iter().map(Vec::as_slice).collect();
            let root = gkm::vertex_orbits(vertices, &refs);
            for a in 0..vertices {
                for b in a + 1..vertices {
                    if root[a] == root[b] {
                        out.insert((a, b, n));
                    }
                }
            }
        }
        out
    }

    fn rank_one_edges(g: &GkmGraph) -> Vec<(usize, usize, i64)> {
        g.edges()
            .iter()
            .map(|e| {
                assert_eq!(e.chi, vec![1]);
                (e.u.min(e.v), e.u.max(e.v), e.n)
            })
            .collect()
    }

    #[test]
    fn restriction_rows() {
        assert_eq!(RankOneCase::new(Surface::P2).iota_dual(), vec![vec![1, -1]]);
        assert_eq!(RankOneCase::new(Surface::P1xP1).iota_dual(), vec![vec![1, 1]]);
        let f3 = RankOneCase::new(Surface::Fn(3));
        let chi2 = IntPoly::character(&[0, 1]);
        assert_eq!(chi2.apply_lattice_map(&f3.iota_dual()).unwrap(), IntPoly::character(&[3]));
    }

    #[test]
    fn base_changed_congruences() {
        let p2 = RankOneCase::new(Surface::P2).small_graph();
        assert_eq!(rank_one_edges(&p2).iter().map(|e| e.2).collect::<Vec<_>>().len(), 3);
        assert_eq!(
            implied(3, &rank_one_edges(&p2)),
            implied(3, &[(0, 1, 1), (0, 2, 1), (1, 2, 2)])
        );
        let q = RankOneCase::new(Surface::P1xP1).small_graph();
        assert!(rank_one_edges(&q).iter().all(|e| e.2 == 1));
        assert_eq!(q.edges().len(), 4);
        for n in 1..=4i64 {
            let f = RankOneCase::new(Surface::Fn(n as u32)).small_graph();
            // vertices s12, s23, s34, s14
            let want: BTreeSet<_> = [(0, 1, 1), (1, 2, 2 * n), (2, 3, 1), (0, 3, n)].into_iter().collect();
            assert_eq!(rank_one_edges(&f).into_iter().collect::<BTreeSet<_>>(), want);
        }
        let err = base_change(&RankOneCase::new(Surface::P2).toric_graph(), &vec![vec![2, 0]]).unwrap_err();
        assert!(matches!(err, Error::NotSurjective));
        let (_, warn) = base_change(&RankOneCase::new(Surface::P2).toric_graph(), &vec![vec![0, 1]]).unwrap();
        assert_eq!(warn.len(), 1);
    }

    #[test]
    fn weyl_vertex_patterns() {
        assert_eq!(RankOneCase::new(Surface::P1).w0_action().perm, vec![1, 0]);
        let p2 = RankOneCase::new(Surface::P2);
        assert_eq!(p2.w0_action().perm[0], 0);
        assert_eq!(p2.small_graph().vertices()[0], "s12");
        let f = RankOneCase::new(Surface::Fn(2));
        let g = f.small_graph();
        let w = f.w0_action();
        assert_eq!((g.vertices()[w.perm[0]].as_str(), g.vertices()[w.perm[2]].as_str()), ("s34", "s12"));
        // the pattern is an automorphism for P1, P2, P1xP1 but not for Fn
        for c in cases() {
            let ok = c.small_graph().validate_automorphism(&c.w0_action()).is_ok();
            assert_eq!(ok, !matches!(c.surface, Surface::Fn(_)), "{}", c.surface.name());
        }
    }

    #[test]
    fn g_equivariant_lists() {
        let p2 = RankOneCase::new(Surface::P2).g_equivariant_presentation();
        assert_eq!(p2.num_vertices(), 2);
        assert_eq!(implied(2, &rank_one_edges(&p2)), implied(2, &[(0, 1, 1)]));
        let q = RankOneCase::new(Surface::P1xP1).g_equivariant_presentation();
        assert_eq!(q.num_vertices(), 3);
        assert_eq!(implied(3, &rank_one_edges(&q)), implied(3, &[(0, 1, 1), (0, 2, 1), (1, 2, 1)]));
        for n in 1..=4i64 {
            let f = RankOneCase::new(Surface::Fn(n as u32)).g_equivariant_presentation();
            assert_eq!(f.num_vertices(), 3);
            assert_eq!(implied(3, &rank_one_edges(&f)), implied(3, &[(0, 1, 2 * n), (0, 2, n)]));
        }
        let p1 = RankOneCase::new(Surface::P1).g_equivariant_presentation();
        assert_eq!((p1.num_vertices(), p1.edges().len()), (1, 0));
    }

    #[test]
    fn extra_relations() {
        let e = |s| RankOneCase::new(s).rs_small().extra.unwrap();
        assert_eq!(e(Surface::P2), vec![1, 1, -2]);
        assert_eq!(e(Surface::P1xP1), vec![1, -1, -1, 1]);
        for n in 1..=4i64 {
            assert_eq!(e(Surface::Fn(n as u32)), vec![n, -1, -2 * n, 1]);
        }
        assert!(RankOneCase::new(Surface::P1).rs_small().extra.is_none());
        for c in cases() {
            let rep = verify_rs_small(&c).unwrap();
            assert!(rep.passed(), "{rep}");
        }
    }

    #[test]
    fn w0_preserves_membership_where_it_is_an_automorphism() {
        for c in cases().into_iter().filter(|c| !matches!(c.surface, Surface::Fn(_))) {
            let g = c.small_graph();
            let sol = gkm::members_window(&g, 2).unwrap();
            for f in &sol.basis {
                assert!(f.act(&g, &c.w0_action()).unwrap().is_member(&g).unwrap().member);
            }
        }
    }

    #[test]
    fn invariant_and_quotient_window_ranks() {
        let rep = RankOneCase::new(Surface::P1).g_equivariant_report(&[1, 2, 3]).unwrap();
        assert!(rep.passed(), "{rep}");
        // a w0-fixed vertex forces symmetric values, which the quotient list
        // does not impose
        let rep = RankOneCase::new(Surface::P2).g_equivariant_report(&[1]).unwrap();
        assert_eq!(rep.checks[1].detail, "invariants 4, quotient members 5");
        let rep = RankOneCase::new(Surface::Fn(2)).g_equivariant_report(&[1]).unwrap();
        assert!(!rep.checks[0].passed);
    }
}
