//! Torus-equivariant K-theory of smooth complete toric varieties: the GKM
//! graph of a fan and the Reisner–Stanley presentation.

use rayon::prelude::*;
use serde_json::{json, Value};

use crate::error::{Error, Result};
use crate::fan::Fan;
use crate::gkm::{members_window, GkmGraph, PiecewiseClass, Window, WindowSolution};
use crate::linalg::{self, IntMatrix};
use crate::report::Report;
use crate::IntPoly;

fn check_fan(fan: &Fan) -> Result<()> {
    if !fan.is_smooth() {
        return Err(Error::NotSmooth);
    }
    if !fan.is_complete() {
        return Err(Error::NotComplete);
    }
    Ok(())
}

/// One vertex per maximal cone and one edge `(chi, 1)` per wall, `chi` the
/// primitive character vanishing on the wall.
pub fn gkm_from_fan(fan: &Fan) -> Result<GkmGraph> {
    check_fan(fan)?;
    let labels = fan.max_cones().iter().map(|c| fan.cone_label(c)).collect();
    let mut g = GkmGraph::new(fan.rank(), labels)?;
    for (a, b, wall) in fan.walls() {
        let ann = fan.orbit_character_lattice(&wall)?;
        debug_assert_eq!(ann.len(), 1);
        g.add_edge(a, b, &ann[0], 1)?;
    }
    Ok(g)
}

/// Generators `x_rho`, their piecewise images and the relation subsets
/// (minimal non-faces) of a smooth complete fan.
#[derive(Clone, Debug)]
pub struct RsPresentation {
    pub fan: Fan,
    pub graph: GkmGraph,
    /// `dual[k][rho]`: the dual basis character of `rho` at cone `k`, if `rho`
    /// is a ray of that cone.
    dual: Vec<Vec<Option<Vec<i64>>>>,
    pub images: Vec<PiecewiseClass>,
    pub relation_subsets: Vec<Vec<usize>>,
}

fn minimal_non_faces(fan: &Fan) -> Vec<Vec<usize>> {
    let n = fan.rays().len();
    let mut out = Vec::new();
    let mut current: Vec<Vec<usize>> = vec![vec![]];
    for _size in 1..=fan.rank() + 1 {
        let mut next = Vec::new();
        for s in &current {
            let start = s.last().map_or(0, |x| x + 1);
            for r in start..n {
                let mut t = s.clone();
                t.push(r);
                let all_faces = (0..t.len()).all(|skip| {
                    let sub: Vec<usize> = t.iter().enumerate().filter(|(i, _)| *i != skip).map(|(_, &x)| x).collect();
                    fan.is_face(&sub)
                });
                if !all_faces {
                    continue;
                }
                if fan.is_face(&t) {
                    next.push(t);
                } else {
                    out.push(t);
                }
            }
        }
        current = next;
    }
    out
}

pub fn rs_presentation(fan: &Fan) -> Result<RsPresentation> {
    let graph = gkm_from_fan(fan)?;
    let r = fan.rank();
    let nrays = fan.rays().len();
    let mut dual = Vec::new();
    for c in fan.max_cones() {
        let m: IntMatrix = linalg::transpose(&c.iter().map(|&i| fan.rays()[i].clone()).collect());
        let inv = linalg::inverse_unimodular(&m).ok_or(Error::NotSmooth)?;
        let mut row = vec![None; nrays];
        for (k, &rho) in c.iter().enumerate() {
            row[rho] = Some(inv[k].clone());
        }
        dual.push(row);
    }
    let images = (0..nrays)
        .map(|rho| {
            PiecewiseClass::new(
                dual.iter()
                    .map(|row| match &row[rho] {
                        Some(m) => IntPoly::character(m),
                        None => IntPoly::one(r),
                    })
                    .collect(),
            )
        })
        .collect();
    Ok(RsPresentation { fan: fan.clone(), graph, dual, images, relation_subsets: minimal_non_faces(fan) })
}

impl RsPresentation {
    /// Exponent at each vertex of the monomial `prod x_rho^a_rho`.
    pub fn monomial_exponents(&self, a: &[i64]) -> Vec<Vec<i64>> {
        self.dual
            .iter()
            .map(|row| {
                let mut e = vec![0; self.fan.rank()];
                for (rho, m) in row.iter().enumerate() {
                    if let Some(m) = m {
                        for (x, y) in e.iter_mut().zip(m) {
                            *x += a[rho] * y;
                        }
                    }
                }
                e
            })
            .collect()
    }

    pub fn monomial_class(&self, a: &[i64]) -> PiecewiseClass {
        PiecewiseClass::new(self.monomial_exponents(a).iter().map(|e| IntPoly::character(e)).collect())
    }

    /// The exponents `a_rho = <m, v_rho>` with `prod x_rho^a_rho = chi^m`.
    pub fn character_as_monomial(&self, m: &[i64]) -> Vec<i64> {
        self.fan.rays().iter().map(|v| v.iter().zip(m).map(|(x, y)| x * y).sum()).collect()
    }

    /// `prod_{rho in s} (x_rho - 1)` as a piecewise class.
    pub fn relation_product(&self, s: &[usize]) -> PiecewiseClass {
        let one = PiecewiseClass::one(&self.graph);
        s.iter().fold(one.clone(), |acc, &rho| {
            let d = self.images[rho].sub(&self.graph, &one).expect("same graph");
            acc.mul(&self.graph, &d).expect("same graph")
        })
    }

    /// All monomials `x^a` whose values at every vertex lie in `window`.
    pub fn window_monomials(&self, window: &Window) -> Vec<Vec<i64>> {
        let rays = self.fan.rays();
        let cones = self.fan.max_cones();
        let b: Vec<i64> = window
            .exps()
            .iter()
            .fold(vec![0; self.fan.rank()], |acc, e| acc.iter().zip(e).map(|(x, y)| (*x).max(y.abs())).collect());
        let bound: Vec<i64> = rays.iter().map(|v| v.iter().zip(&b).map(|(x, y)| x.abs() * y).sum()).collect();
        // cones become checkable once their largest ray index is assigned
        let mut ready: Vec<Vec<usize>> = vec![vec![]; rays.len()];
        for (k, c) in cones.iter().enumerate() {
            ready[*c.iter().max().unwrap()].push(k);
        }
        let mut out = Vec::new();
        let mut a = vec![0i64; rays.len()];
        self.search(0, &mut a, &bound, &ready, window, &mut out);
        out
    }

    fn search(
        &self,
        k: usize,
        a: &mut Vec<i64>,
        bound: &[i64],
        ready: &[Vec<usize>],
        window: &Window,
        out: &mut Vec<Vec<i64>>,
    ) {
        if k == a.len() {
            out.push(a.clone());
            return;
        }
        for x in -bound[k]..=bound[k] {
            a[k] = x;
            let ok = ready[k].iter().all(|&c| {
                let mut e = vec![0; self.fan.rank()];
                for (rho, m) in self.dual[c].iter().enumerate() {
                    if let Some(m) = m {
                        for (t, y) in e.iter_mut().zip(m) {
                            *t += a[rho] * y;
                        }
                    }
                }
                window.position(&e).is_some()
            });
            if ok {
                self.search(k + 1, a, bound, ready, window, out);
            }
        }
        a[k] = 0;
    }

    pub fn to_json(&self) -> Value {
        json!({
            "fan": self.fan.to_json(),
            "vertices": self.graph.vertices(),
            "generators": self.images.iter().enumerate().map(|(i, f)| json!({
                "ray": i + 1,
                "image": f.to_json(),
            })).collect::<Vec<_>>(),
            "relation_subsets": self.relation_subsets.iter()
                .map(|s| s.iter().map(|i| i + 1).collect::<Vec<_>>()).collect::<Vec<_>>(),
        })
    }
}

/// Check generator membership, the relation products and window surjectivity
/// of monomials in the generators onto the member classes in `[-b, b]^rank`.
pub fn verify_rs(fan: &Fan, b: i64) -> Result<Report> {
    let rs = rs_presentation(fan)?;
    let mut report = Report::new(format!("Reisner-Stanley presentation, window {b}"));
    for (i, f) in rs.images.iter().enumerate() {
        let v = f.is_member(&rs.graph)?;
        let detail = v.failure.map(|x| x.description).unwrap_or_default();
        report.push(format!("generator x{} is a member", i + 1), v.member, detail);
    }
    let rel: Vec<bool> = rs
        .relation_subsets
        .par_iter()
        .map(|s| rs.relation_product(s).is_zero())
        .collect();
    for (s, ok) in rs.relation_subsets.iter().zip(rel) {
        let names: Vec<String> = s.iter().map(|i| format!("x{}", i + 1)).collect();
        report.push(format!("relation over {{{}}} vanishes", names.join(",")), ok, "");
    }
    let sol = members_window(&rs.graph, b)?;
    let (ok, detail) = surjectivity(&rs, &sol);
    report.push("window surjectivity", ok, detail);
    Ok(report)
}

fn surjectivity(rs: &RsPresentation, sol: &WindowSolution) -> (bool, String) {
    let monos = rs.window_monomials(&sol.window);
    let classes: Vec<PiecewiseClass> = monos.iter().map(|a| rs.monomial_class(a)).collect();
    let ok = sol.span_equals(&classes);
    (ok, format!("{} monomials, member rank {}", classes.len(), sol.rank))
}
