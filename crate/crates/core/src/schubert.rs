//! Bruhat GKM graphs of flag varieties, Demazure operators, Schubert classes
//! and their structure constants.

use std::collections::{BTreeMap, BTreeSet};

use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::gkm::{Automorphism, GkmGraph, PiecewiseClass};
use crate::linalg::{self, IntMatrix};
use crate::report::Report;
use crate::rootdata::{self, word_label, RootDatum, WeylGroup};
use crate::wonderful::MinimalRankDatum;
use crate::IntPoly;

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub enum Convention {
    /// `D_i f = (f - e^{-a_i} s_i f) / (1 - e^{-a_i})`.
    #[default]
    Standard,
    /// The same with `a_i` replaced by `-a_i`.
    Opposite,
}

impl Convention {
    fn twist(self, alpha: &[i64]) -> Vec<i64> {
        match self {
            Convention::Standard => alpha.iter().map(|x| -x).collect(),
            Convention::Opposite => alpha.to_vec(),
        }
    }
}

/// `(f - e^c g) / (1 - e^c)` with `c` the twisted root.
fn divided_difference(f: &IntPoly, g: &IntPoly, c: &[i64]) -> Result<IntPoly> {
    let num = f - &g.shift(c);
    let den = &IntPoly::one(f.rank()) - &IntPoly::character(c);
    num.exact_div(&den)?
        .ok_or_else(|| Error::InexactDivision(format!("Demazure numerator is not divisible by 1 - e^{c:?}")))
}

pub fn demazure(datum: &RootDatum, f: &IntPoly, i: usize, conv: Convention) -> Result<IntPoly> {
    let s = datum.reflection(i);
    divided_difference(f, &f.apply_lattice_map(&s)?, &conv.twist(&datum.simple_roots()[i]))
}

/// Bruhat graph: vertices `W`, edges `(w, s_a w)` labelled by the positive
/// root `a`, with the left action of `W` registered.
pub fn flag_bruhat_gkm(datum: &RootDatum, w: &WeylGroup) -> Result<GkmGraph> {
    let labels = w.elements().iter().map(|e| word_label(&e.word)).collect();
    let mut g = GkmGraph::new(datum.rank(), labels)?;
    let refl: Vec<(usize, Vec<i64>)> = datum
        .positive_roots()
        .iter()
        .map(|a| (reflection_index(datum, w, &a.vector), a.vector.clone()))
        .collect();
    let mut seen = BTreeSet::new();
    for x in 0..w.len() {
        for (s, a) in &refl {
            let y = w.mul(*s, x);
            if seen.insert((x.min(y), x.max(y))) {
                g.add_edge(x.min(y), x.max(y), a, 1)?;
            }
        }
    }
    for u in 1..w.len() {
        if w.element(u).length() == 1 {
            let perm = (0..w.len()).map(|x| w.mul(u, x)).collect();
            g.add_automorphism(Automorphism { perm, mat: w.element(u).mat.clone() })?;
        }
    }
    Ok(g)
}

fn reflection_index(datum: &RootDatum, w: &WeylGroup, alpha: &[i64]) -> usize {
    for x in 0..w.len() {
        for i in 0..datum.num_simple() {
            if linalg::mat_vec(&w.element(x).mat, &datum.simple_roots()[i]) == alpha {
                return w.mul(w.mul(x, w.simple(i)), w.inverse(x));
            }
        }
    }
    unreachable!("roots are conjugate to simple roots")
}

/// Full left action of `W` on the Bruhat graph.
pub fn weyl_action(w: &WeylGroup) -> Vec<Automorphism> {
    (0..w.len())
        .map(|u| Automorphism { perm: (0..w.len()).map(|x| w.mul(u, x)).collect(), mat: w.element(u).mat.clone() })
        .collect()
}

/// Bruhat interval below `x`: products of subwords of a reduced word.
pub fn bruhat_below(w: &WeylGroup, x: usize) -> BTreeSet<usize> {
    let mut set = BTreeSet::from([0usize]);
    for &i in &w.element(x).word {
        let s = w.simple(i);
        let more: Vec<usize> = set.iter().map(|&y| w.mul(y, s)).collect();
        set.extend(more);
    }
    set
}

/// GKM Demazure operator on classes of the Bruhat graph:
/// `(D_i f)_v = (f_v - e^{-v a_i} f_{v s_i}) / (1 - e^{-v a_i})`.
pub fn demazure_class(
    datum: &RootDatum,
    w: &WeylGroup,
    f: &PiecewiseClass,
    i: usize,
    conv: Convention,
) -> Result<PiecewiseClass> {
    let s = w.simple(i);
    let values = (0..w.len())
        .map(|v| {
            let va = linalg::mat_vec(&w.element(v).mat, &datum.simple_roots()[i]);
            divided_difference(&f.values[v], &f.values[w.mul(v, s)], &conv.twist(&va))
        })
        .collect::<Result<Vec<_>>>()?;
    Ok(PiecewiseClass::new(values))
}

#[derive(Clone, Debug)]
pub struct SchubertBasis {
    pub weyl: WeylGroup,
    pub graph: GkmGraph,
    /// `classes[w]` for `w` indexed like `weyl`.
    pub classes: Vec<PiecewiseClass>,
    pub convention: Convention,
}

/// Classes `O_w`, from the longest element (supported at `w0`, value
/// `prod_{a > 0} (1 - e^{t(a)})`) downwards by `O_{w} = D_i O_{w s_i}` with
/// `l(w s_i) > l(w)`, `i` least.
pub fn schubert_basis(datum: &RootDatum, conv: Convention) -> Result<SchubertBasis> {
    let w = WeylGroup::generate(datum, rootdata::DEFAULT_WEYL_BOUND)?;
    let graph = flag_bruhat_gkm(datum, &w)?;
    let n = w.len();
    let r = datum.rank();
    let w0 = w.longest();
    let mut top = IntPoly::one(r);
    for a in datum.positive_roots() {
        let t: Vec<i64> = conv.twist(&a.vector).iter().map(|x| -x).collect();
        top = &top * &(&IntPoly::one(r) - &IntPoly::character(&t));
    }
    let mut classes: Vec<Option<PiecewiseClass>> = vec![None; n];
    let mut values = vec![IntPoly::zero(r); n];
    values[w0] = top;
    classes[w0] = Some(PiecewiseClass::new(values));
    for x in (0..n).rev() {
        if x == w0 {
            continue;
        }
        let len = w.element(x).length();
        let i = (0..datum.num_simple())
            .find(|&i| w.element(w.mul(x, w.simple(i))).length() > len)
            .ok_or_else(|| Error::Triangularity("non-longest element without ascent".into()))?;
        let up = classes[w.mul(x, w.simple(i))].as_ref().expect("longer classes come first");
        classes[x] = Some(demazure_class(datum, &w, up, i, conv)?);
    }
    let classes: Vec<PiecewiseClass> = classes.into_iter().map(Option::unwrap).collect();
    let basis = SchubertBasis { weyl: w, graph, classes, convention: conv };
    basis.check_triangular()?;
    Ok(basis)
}

impl SchubertBasis {
    pub fn len(&self) -> usize {
        self.classes.len()
    }

    pub fn is_empty(&self) -> bool {
        self.classes.is_empty()
    }

    pub fn label(&self, x: usize) -> String {
        word_label(&self.weyl.element(x).word)
    }

    pub fn index_of(&self, label: &str) -> Option<usize> {
        (0..self.len()).find(|&x| self.label(x) == label)
    }

    /// `O_w` vanishes off the upper Bruhat interval of `w` and not at `w`.
    fn check_triangular(&self) -> Result<()> {
        for (x, f) in self.classes.iter().enumerate() {
            if f.values[x].is_zero() {
                return Err(Error::Triangularity(format!("O_{} vanishes at its own vertex", self.label(x))));
            }
            for v in 0..self.len() {
                if !f.values[v].is_zero() && !bruhat_below(&self.weyl, v).contains(&x) {
                    return Err(Error::Triangularity(format!(
                        "O_{} is nonzero at {}",
                        self.label(x),
                        self.label(v)
                    )));
                }
            }
        }
        Ok(())
    }

    /// Expand a class in the basis by back-substitution along the
    /// length-then-word order; `None` if some coefficient is not a Laurent
    /// polynomial or a remainder is left.
    pub fn expand(&self, f: &PiecewiseClass) -> Result<Option<Vec<IntPoly>>> {
        let mut rest = f.clone();
        let mut coeffs = Vec::with_capacity(self.len());
        for x in 0..self.len() {
            let Some(c) = rest.values[x].exact_div(&self.classes[x].values[x])? else {
                return Ok(None);
            };
            if !c.is_zero() {
                let scaled = PiecewiseClass::new(self.classes[x].values.iter().map(|p| p * &c).collect());
                rest = rest.sub(&self.graph, &scaled)?;
            }
            coeffs.push(c);
        }
        Ok(rest.is_zero().then_some(coeffs))
    }

    /// `O_u O_v = sum_w c^w_{uv} O_w`, re-multiplied and checked.
    pub fn structure_constants(&self, u: usize, v: usize) -> Result<Vec<IntPoly>> {
        let prod = self.classes[u].mul(&self.graph, &self.classes[v])?;
        let c = self
            .expand(&prod)?
            .ok_or_else(|| Error::Triangularity("product is not in the span of the basis".into()))?;
        let mut back = PiecewiseClass::zero(&self.graph);
        for (x, cx) in c.iter().enumerate() {
            let t = PiecewiseClass::new(self.classes[x].values.iter().map(|p| p * cx).collect());
            back = back.add(&self.graph, &t)?;
        }
        if back != prod {
            return Err(Error::Triangularity("re-multiplication does not reproduce the product".into()));
        }
        Ok(c)
    }

    /// All `|W|^2` expansions, keyed by `(u, v)`.
    pub fn table(&self) -> Result<BTreeMap<(usize, usize), Vec<IntPoly>>> {
        let pairs: Vec<(usize, usize)> = (0..self.len()).flat_map(|u| (0..self.len()).map(move |v| (u, v))).collect();
        pairs
            .par_iter()
            .map(|&(u, v)| Ok(((u, v), self.structure_constants(u, v)?)))
            .collect()
    }

    pub fn table_json(&self) -> Result<serde_json::Value> {
        let mut out = serde_json::Map::new();
        for ((u, v), c) in self.table()? {
            for (x, p) in c.iter().enumerate() {
                if !p.is_zero() {
                    out.insert(format!("({},{},{})", self.label(u), self.label(v), self.label(x)), p.to_json());
                }
            }
        }
        Ok(serde_json::Value::Object(out))
    }
}

/// A root datum on coordinates of the split lattice whose Weyl group is
/// `W_{G/H}`.
pub fn restricted_datum(mrd: &MinimalRankDatum) -> Result<RootDatum> {
    let rr = &mrd.restricted;
    let s = rr.rank();
    let simple: Vec<Vec<i64>> = rr.simple.iter().map(|g| rr.coords(g).expect("in split lattice")).collect();
    let mut coroots = Vec::new();
    for g in &simple {
        // the element of W_G/H negating g is the reflection I - g c^T
        let refl = rr
            .weyl
            .iter()
            .find(|m| linalg::mat_vec(m, g) == g.iter().map(|x| -x).collect::<Vec<_>>() && {
                let d: IntMatrix = (0..s).map(|i| (0..s).map(|k| i64::from(i == k) - m[i][k]).collect()).collect();
                linalg::rank_small(&d) == 1
            })
            .ok_or_else(|| Error::InvalidRootDatum("no reflection for a simple restricted root".into()))?;
        let row = g.iter().position(|&x| x != 0).unwrap();
        let c: Vec<i64> = (0..s).map(|k| (i64::from(row == k) - refl[row][k]) / g[row]).collect();
        coroots.push(c);
    }
    let cartan: IntMatrix = (0..simple.len())
        .map(|i| (0..simple.len()).map(|j| simple[j].iter().zip(&coroots[i]).map(|(a, b)| a * b).sum()).collect())
        .collect();
    RootDatum::new(s, simple, cartan, Some(coroots), None)
}

/// Schubert classes of the restricted flag graph, carried to `Y` through the
/// lattice inclusion and to `X` block by block; memberships are reported.
pub fn symmetric_schubert(mrd: &MinimalRankDatum) -> Result<(Vec<PiecewiseClass>, Report)> {
    let mut rep = Report::new("Schubert classes of the restricted root system");
    let rd = restricted_datum(mrd)?;
    let sb = schubert_basis(&rd, Convention::Standard)?;
    let lift: IntMatrix = (0..mrd.rank()).map(|i| mrd.restricted.basis.iter().map(|b| b[i]).collect()).collect();
    let yv = mrd.y_vertices();
    let y = mrd.build_gkm_y()?;
    let x = mrd.build_gkm_x()?;
    // flag vertex of each Y vertex
    let flag_of: Vec<usize> = yv
        .iter()
        .map(|&xv| {
            let hi = mrd.w_h.iter().position(|&h| mrd.vertex_of(h) == xv).expect("Y vertex");
            sb.weyl.find(&mrd.restricted.weyl[mrd.restricted.weyl_of[hi]]).expect("restricted Weyl element")
        })
        .collect();
    let ycls: Vec<PiecewiseClass> = sb
        .classes
        .iter()
        .map(|f| {
            PiecewiseClass::new(flag_of.iter().map(|&k| f.values[k].apply_lattice_map(&lift).expect("lift")).collect())
        })
        .collect();
    let ybad = ycls.iter().filter(|f| !f.is_member(&y).map(|v| v.member).unwrap_or(false)).count();
    rep.push("members of Y", ybad == 0, format!("{} classes, {ybad} fail", ycls.len()));
    let mut out = Vec::new();
    for &w in &mrd.reps_h {
        let m = &mrd.weyl.element(w).mat;
        for f in &ycls {
            let mut values = vec![IntPoly::zero(mrd.rank()); x.num_vertices()];
            for (j, &xv) in yv.iter().enumerate() {
                values[mrd.vertex_of(mrd.weyl.mul(w, mrd.reps_l[xv]))] = f.values[j].apply_lattice_map(m)?;
            }
            out.push(PiecewiseClass::new(values));
        }
    }
    let xbad = out.iter().filter(|f| !f.is_member(&x).map(|v| v.member).unwrap_or(false)).count();
    rep.push("members of X", xbad == 0, format!("{} classes over {} blocks, {xbad} fail", out.len(), mrd.reps_h.len()));
    Ok((out, rep))
}
