//! GKM graphs of wonderful compactifications of minimal-rank symmetric
//! spaces, the toric subvariety `Y`, and checks of the product and
//! invariant descriptions.

use std::collections::{BTreeMap, BTreeSet};

use num_bigint::BigInt;
use serde_json::{json, Value};

use crate::error::{Error, Result};
use crate::fan::Fan;
use crate::gkm::{self, Automorphism, GkmGraph, PiecewiseClass, Window};
use crate::linalg::{self, IntMatrix};
use crate::report::Report;
use crate::rootdata::{
    self, parabolic_subgroup, restricted_roots, theta_centralizer, theta_partition, word_label, Involution,
    RestrictedRoots, RootDatum, ThetaPartition, WeylGroup,
};
use crate::toric;
use crate::IntPoly;

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord)]
pub enum CurveType {
    One,
    Two,
}

#[derive(Clone, Debug)]
pub struct MinimalRankDatum {
    pub datum: RootDatum,
    pub theta: Involution,
    /// Datum of `H` on the fixed lattice, used for Steinberg bases.
    pub h_datum: Option<RootDatum>,
    pub weyl: WeylGroup,
    pub partition: ThetaPartition,
    pub w_l: Vec<usize>,
    pub w_h: Vec<usize>,
    pub restricted: RestrictedRoots,
    /// Minimal representatives of `W / W_L` (the fixed points of `X`).
    pub reps_l: Vec<usize>,
    /// Minimal representatives of `W / W_H`.
    pub reps_h: Vec<usize>,
    pub split_rank: usize,
    pub fixed_rank: usize,
}

fn eigen_rank(theta: &IntMatrix, sign: i64) -> usize {
    let r = theta.len();
    let m: IntMatrix = (0..r).map(|i| (0..r).map(|j| theta[i][j] - sign * i64::from(i == j)).collect()).collect();
    r - linalg::rank_small(&m)
}

pub fn build_minimal_rank(datum: RootDatum, theta: Involution, h_datum: Option<RootDatum>) -> Result<MinimalRankDatum> {
    let partition = theta_partition(&datum, &theta)?;
    let split_rank = eigen_rank(&theta.theta, -1);
    let fixed_rank = eigen_rank(&theta.theta, 1);
    let fail = |m: String| Err(Error::NotMinimalRank(m));
    if split_rank == 0 {
        return fail("theta has no split part".into());
    }
    if split_rank + fixed_rank != datum.rank() {
        return fail(format!("eigenlattice ranks {split_rank} + {fixed_rank} differ from {}", datum.rank()));
    }
    if let Some(a) = datum.roots().iter().find(|a| theta.apply(&a.vector).iter().zip(&a.vector).all(|(x, y)| *x == -y)) {
        return fail(format!("theta negates the root {:?}", a.vector));
    }
    for a in &partition.phi_l_pos {
        if theta.apply(a) != *a {
            return fail(format!("theta moves the Levi root {a:?}"));
        }
    }
    let weyl = WeylGroup::generate(&datum, rootdata::DEFAULT_WEYL_BOUND)?;
    let w_h = theta_centralizer(&weyl, &theta);
    let w_l = parabolic_subgroup(&weyl, &partition.delta_l);
    if !w_l.iter().all(|x| w_h.binary_search(x).is_ok()) {
        return fail("W_L is not contained in W_H".into());
    }
    let restricted = restricted_roots(&datum, &theta, &partition, &weyl, &w_h)?;
    if restricted.simple.len() != split_rank || restricted.rank() != split_rank {
        return fail(format!(
            "{} simple restricted roots spanning rank {} for split rank {split_rank}",
            restricted.simple.len(),
            restricted.rank()
        ));
    }
    if w_h.len() != w_l.len() * restricted.weyl.len() {
        return fail(format!(
            "|W_H| = {} but |W_L| * |W_G/H| = {} * {}",
            w_h.len(),
            w_l.len(),
            restricted.weyl.len()
        ));
    }
    let reps_l = weyl.minimal_coset_reps(&w_l)?;
    let reps_h = weyl.minimal_coset_reps(&w_h)?;
    Ok(MinimalRankDatum {
        datum,
        theta,
        h_datum,
        weyl,
        partition,
        w_l,
        w_h,
        restricted,
        reps_l,
        reps_h,
        split_rank,
        fixed_rank,
    })
}

/// Parse a root datum and an involution file (`{"theta": .., "h_datum": ..}`).
pub fn from_json(datum: &Value, theta: &Value) -> Result<MinimalRankDatum> {
    let d = RootDatum::from_json(datum)?;
    let t: Involution = serde_json::from_value(theta.clone())?;
    let t = Involution::new(&d, t.theta)?;
    let h = match theta.get("h_datum") {
        Some(v) => Some(RootDatum::from_json(v)?),
        None => None,
    };
    build_minimal_rank(d, t, h)
}

pub fn bundled(name: &str) -> Result<MinimalRankDatum> {
    let (d, t) = rootdata::bundled(name)
        .ok_or_else(|| Error::InvalidRootDatum(format!("unknown bundled instance {name}")))?;
    from_json(&serde_json::from_str(d)?, &serde_json::from_str(t)?)
}

impl MinimalRankDatum {
    pub fn rank(&self) -> usize {
        self.datum.rank()
    }

    /// Index in `reps_l` of the fixed point `w z0`.
    pub fn vertex_of(&self, w: usize) -> usize {
        let r = self.weyl.coset_rep(w, &self.w_l);
        self.reps_l.binary_search(&r).expect("coset representative")
    }

    pub fn vertex_labels(&self) -> Vec<String> {
        self.reps_l.iter().map(|&w| word_label(&self.weyl.element(w).word)).collect()
    }

    /// The reflection in a root, as a Weyl group index.
    pub fn reflection_of(&self, alpha: &[i64]) -> usize {
        for w in 0..self.weyl.len() {
            let m = &self.weyl.element(w).mat;
            for i in 0..self.datum.num_simple() {
                if linalg::mat_vec(m, &self.datum.simple_roots()[i]) == alpha {
                    let s = self.weyl.simple(i);
                    return self.weyl.mul(self.weyl.mul(w, s), self.weyl.inverse(w));
                }
            }
        }
        unreachable!("every root is conjugate to a simple root")
    }

    fn gamma(&self, a: &[i64]) -> Vec<i64> {
        a.iter().zip(self.theta.apply(a)).map(|(x, y)| x - y).collect()
    }

    /// The curves through the base point: `(endpoint element, character, type)`.
    pub fn base_curves(&self) -> Vec<(usize, Vec<i64>, CurveType)> {
        let mut out = Vec::new();
        for a in &self.partition.phi_minus {
            out.push((self.reflection_of(a), a.clone(), CurveType::One));
        }
        for a in &self.partition.phi_minus {
            let t = self.weyl.mul(self.reflection_of(a), self.reflection_of(&self.theta.apply(a)));
            out.push((t, self.gamma(a), CurveType::Two));
        }
        out
    }

    /// All curves as `W`-translates of the base curves, deduplicated.
    pub fn curves(&self) -> Vec<Curve> {
        let base = self.base_curves();
        let mut seen: BTreeMap<(usize, usize, Vec<i64>, i64), usize> = BTreeMap::new();
        let mut out: Vec<Curve> = Vec::new();
        for w in 0..self.weyl.len() {
            let m = &self.weyl.element(w).mat;
            for (t, chi, ty) in &base {
                let (u, v) = (self.vertex_of(w), self.vertex_of(self.weyl.mul(w, *t)));
                if u == v {
                    continue;
                }
                let (chi, n) = crate::charlat::normalize_congruence(&linalg::mat_vec(m, chi), 1)
                    .expect("roots are nonzero");
                let key = (u.min(v), u.max(v), chi.clone(), n);
                match seen.get(&key) {
                    Some(&k) => {
                        if out[k].kind != *ty {
                            out[k].both = true;
                        }
                    }
                    None => {
                        seen.insert(key, out.len());
                        out.push(Curve { u: u.min(v), v: u.max(v), chi, n, kind: *ty, both: false });
                    }
                }
            }
        }
        out.sort_by(|a, b| (a.u, a.v, &a.chi, a.n).cmp(&(b.u, b.v, &b.chi, b.n)));
        out
    }

    fn vertex_action(&self, w: usize, verts: &[usize]) -> Vec<usize> {
        verts.iter().map(|&x| self.vertex_of(self.weyl.mul(w, self.reps_l[x]))).collect()
    }

    /// The GKM graph of `X` with the action of `W_H` registered.
    pub fn build_gkm_x(&self) -> Result<GkmGraph> {
        let mut g = GkmGraph::new(self.rank(), self.vertex_labels())?;
        for c in self.curves() {
            g.add_edge(c.u, c.v, &c.chi, c.n)?;
        }
        let all: Vec<usize> = (0..self.reps_l.len()).collect();
        for &h in &self.w_h[1..] {
            g.add_automorphism(Automorphism { perm: self.vertex_action(h, &all), mat: self.weyl.element(h).mat.clone() })?;
        }
        Ok(g)
    }

    /// X-vertices lying in `Y`, i.e. the points `h z0` with `h` in `W_H`.
    pub fn y_vertices(&self) -> Vec<usize> {
        let s: BTreeSet<usize> = self.w_h.iter().map(|&h| self.vertex_of(h)).collect();
        s.into_iter().collect()
    }

    /// The GKM graph of `Y`: `W_H`-translates of the Type 2 curves at the
    /// base point.
    pub fn build_gkm_y(&self) -> Result<GkmGraph> {
        let yv = self.y_vertices();
        let labels = self.vertex_labels();
        let mut g = GkmGraph::new(self.rank(), yv.iter().map(|&x| labels[x].clone()).collect())?;
        let pos = |x: usize| yv.binary_search(&x).ok();
        let mut seen = BTreeSet::new();
        for &h in &self.w_h {
            let m = &self.weyl.element(h).mat;
            for (t, chi, ty) in self.base_curves() {
                if ty != CurveType::Two {
                    continue;
                }
                let (u, v) = (self.vertex_of(h), self.vertex_of(self.weyl.mul(h, t)));
                let (Some(a), Some(b)) = (pos(u), pos(v)) else {
                    return Err(Error::InvalidGraph("a Type 2 curve leaves Y".into()));
                };
                if a == b {
                    continue;
                }
                let (chi, n) = crate::charlat::normalize_congruence(&linalg::mat_vec(m, &chi), 1)?;
                if seen.insert((a.min(b), a.max(b), chi.clone(), n)) {
                    g.add_edge(a.min(b), a.max(b), &chi, n)?;
                }
            }
        }
        for &h in &self.w_h[1..] {
            let perm = self.vertex_action(h, &yv).into_iter().map(|x| pos(x).expect("W_H preserves Y")).collect();
            g.add_automorphism(Automorphism { perm, mat: self.weyl.element(h).mat.clone() })?;
        }
        Ok(g)
    }

    pub fn summary_json(&self) -> Value {
        json!({
            "rank": self.rank(),
            "split_rank": self.split_rank,
            "fixed_rank": self.fixed_rank,
            "delta_l": self.partition.delta_l.iter().map(|i| i + 1).collect::<Vec<_>>(),
            "delta_minus": self.partition.delta_minus.iter().map(|i| i + 1).collect::<Vec<_>>(),
            "phi_minus": self.partition.phi_minus,
            "restricted_roots": self.restricted.roots,
            "restricted_simple": self.restricted.simple,
            "order_w": self.weyl.len(),
            "order_w_l": self.w_l.len(),
            "order_w_h": self.w_h.len(),
            "order_w_g_h": self.restricted.weyl.len(),
            "fixed_points": self.vertex_labels(),
            "y_points": self.y_vertices().iter().map(|&x| self.vertex_labels()[x].clone()).collect::<Vec<_>>(),
        })
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Curve {
    pub u: usize,
    pub v: usize,
    pub chi: Vec<i64>,
    pub n: i64,
    pub kind: CurveType,
    /// Also produced by a curve of the other type.
    pub both: bool,
}

type EdgeKey = (usize, usize, Vec<i64>, i64);

fn edge_keys(g: &GkmGraph) -> BTreeSet<EdgeKey> {
    g.constraints().into_iter().map(|c| (c.u.min(c.v), c.u.max(c.v), c.chi, c.n)).collect()
}

/// A vertex bijection `a -> b` carrying congruences onto congruences with
/// identical labels, found by backtracking.
pub fn find_isomorphism(a: &GkmGraph, b: &GkmGraph) -> Option<Vec<usize>> {
    let n = a.num_vertices();
    if n != b.num_vertices() || a.rank() != b.rank() {
        return None;
    }
    let ea = edge_keys(a);
    let eb = edge_keys(b);
    if ea.len() != eb.len() {
        return None;
    }
    let label_between = |e: &BTreeSet<EdgeKey>, x: usize, y: usize| -> Vec<(Vec<i64>, i64)> {
        e.iter()
            .filter(|k| k.0 == x.min(y) && k.1 == x.max(y))
            .map(|k| (k.2.clone(), k.3))
            .collect()
    };
    fn go(
        k: usize,
        n: usize,
        map: &mut Vec<usize>,
        used: &mut Vec<bool>,
        ok: &dyn Fn(&[usize], usize, usize) -> bool,
    ) -> bool {
        if k == n {
            return true;
        }
        for y in 0..n {
            if !used[y] && ok(map, k, y) {
                map.push(y);
                used[y] = true;
                if go(k + 1, n, map, used, ok) {
                    return true;
                }
                map.pop();
                used[y] = false;
            }
        }
        false
    }
    let ok = |map: &[usize], k: usize, y: usize| -> bool {
        (0..k).all(|x| label_between(&ea, x, k) == label_between(&eb, map[x], y))
    };
    let mut map = Vec::new();
    let mut used = vec![false; n];
    go(0, n, &mut map, &mut used, &ok).then_some(map)
}

/// `X = P(M_2)` for the group case: the `P^3` fan restricted along the
/// inclusion of the two-dimensional torus.
pub fn projective_oracle() -> Result<GkmGraph> {
    let p3 = toric::gkm_from_fan(&Fan::projective_space(3))?;
    let iota = vec![vec![0, -1, -1], vec![-1, 0, -1]];
    Ok(crate::rankone::base_change(&p3, &iota)?.0)
}

fn solve_square(rows_as_cols: &IntMatrix, v: &[i64]) -> Option<Vec<i64>> {
    // columns of the matrix are the basis vectors
    let n = v.len();
    let a: IntMatrix = (0..n).map(|i| rows_as_cols.iter().map(|c| c[i]).collect()).collect();
    let d = linalg::det(&a);
    if d == 0 {
        return None;
    }
    (0..n)
        .map(|j| {
            let mut m = a.clone();
            for i in 0..n {
                m[i][j] = v[i];
            }
            let x = linalg::det(&m);
            (x % d == 0).then_some(x / d)
        })
        .collect()
}

#[derive(Clone, Debug)]
pub struct YFan {
    pub fan: Fan,
    /// The maximal cone belonging to each vertex of the `Y` graph.
    pub vertex_cone: Vec<usize>,
    pub smooth: bool,
}

/// The Weyl chamber fan of the restricted root system on the split
/// cocharacter lattice (coordinates dual to the echelon basis of the split
/// character lattice); the base point owns the antidominant chamber.
pub fn toric_y_fan(mrd: &MinimalRankDatum) -> Result<YFan> {
    let rr = &mrd.restricted;
    let s = rr.rank();
    let simple: IntMatrix = rr.simple.iter().map(|g| rr.coords(g).expect("simple restricted root in M_S")).collect();
    // fundamental coweights: columns of simple^{-1}, made primitive
    let d = linalg::det(&simple);
    let coweights: Vec<Vec<i64>> = (0..s)
        .map(|j| {
            let e: Vec<i64> = (0..s).map(|i| i64::from(i == j) * d).collect();
            let col = solve_square(&linalg::transpose(&simple), &e).expect("nonsingular");
            let g = linalg::gcd_all(&col);
            col.iter().map(|x| x / g).collect()
        })
        .collect();
    let yv = mrd.y_vertices();
    let mut rays: Vec<Vec<i64>> = Vec::new();
    let mut cones: Vec<Vec<usize>> = vec![Vec::new(); yv.len()];
    for (hi, &h) in mrd.w_h.iter().enumerate() {
        let y = yv.binary_search(&mrd.vertex_of(h)).expect("Y vertex");
        if !cones[y].is_empty() {
            continue;
        }
        let a = &rr.weyl[rr.weyl_of[hi]];
        let dual = linalg::transpose(&linalg::inverse_unimodular(a).expect("finite order"));
        for w in &coweights {
            let r: Vec<i64> = linalg::mat_vec(&dual, w).iter().map(|x| -x).collect();
            let k = match rays.iter().position(|x| *x == r) {
                Some(k) => k,
                None => {
                    rays.push(r);
                    rays.len() - 1
                }
            };
            cones[y].push(k);
        }
    }
    let fan = Fan::new(s, rays, cones)?;
    Ok(YFan { smooth: fan.is_smooth(), vertex_cone: (0..yv.len()).collect(), fan })
}

/// Compare the toric GKM graph of the chamber fan with the `Y` graph, after
/// writing fan characters in the split sublattice of `M`.
pub fn compare_toric_y(mrd: &MinimalRankDatum) -> Result<Report> {
    let mut rep = Report::new("toric model of Y");
    let yf = toric_y_fan(mrd)?;
    rep.push("chambers", yf.fan.max_cones().len() == mrd.restricted.weyl.len(), format!("{} chambers", yf.fan.max_cones().len()));
    if !yf.smooth {
        rep.push("smooth chamber fan", false, "Y may be singular; graph comparison skipped");
        return Ok(rep);
    }
    let tg = toric::gkm_from_fan(&yf.fan)?;
    let y = mrd.build_gkm_y()?;
    let basis = &mrd.restricted.basis;
    let lift = |c: &[i64]| -> Vec<i64> {
        (0..mrd.rank()).map(|i| c.iter().zip(basis).map(|(x, b)| x * b[i]).sum()).collect()
    };
    let mut fan_edges = BTreeSet::new();
    for e in tg.edges() {
        let (chi, n) = crate::charlat::normalize_congruence(&lift(&e.chi), e.n)?;
        let (a, b) = (yf.vertex_cone[e.u], yf.vertex_cone[e.v]);
        fan_edges.insert((a.min(b), a.max(b), chi, n));
    }
    let ours = edge_keys(&y);
    let dirs = |s: &BTreeSet<EdgeKey>| -> BTreeSet<(usize, usize, Vec<i64>)> {
        s.iter().map(|k| (k.0, k.1, k.2.clone())).collect()
    };
    rep.push("curve directions", dirs(&fan_edges) == dirs(&ours), format!("{} fan walls, {} Y curves", fan_edges.len(), ours.len()));
    rep.push("curve moduli", fan_edges == ours, "exponents after identifying the fan lattice with the span of restricted roots");
    Ok(rep)
}

fn translate(mrd: &MinimalRankDatum, w: usize, p: &IntPoly) -> IntPoly {
    p.apply_lattice_map(&mrd.weyl.element(w).mat).expect("same rank")
}

/// Place every window member of the `Y` graph on each block `w Y`
/// (`w` in `W^H`) and test the result against all congruences of `X`.
pub fn verify_product_decomposition(mrd: &MinimalRankDatum, b: i64) -> Result<Report> {
    let mut rep = Report::new(format!("product decomposition over W^H at B = {b}"));
    let x = mrd.build_gkm_x()?;
    let y = mrd.build_gkm_y()?;
    let yv = mrd.y_vertices();
    let mats: Vec<IntMatrix> = mrd.weyl.elements().iter().map(|e| e.mat.clone()).collect();
    let window = Window::closed_cube(mrd.rank(), b, &mats);
    let ysol = gkm::invariants_in_window(&y, &[], window.clone())?;
    // X restricted to Type 2 curves, for diagnosing failures
    let mut x2 = GkmGraph::new(mrd.rank(), x.vertices().to_vec())?;
    for c in mrd.curves().iter().filter(|c| c.kind == CurveType::Two || c.both) {
        x2.add_edge(c.u, c.v, &c.chi, c.n)?;
    }
    let mut images = Vec::new();
    let mut blocks = BTreeSet::new();
    for &w in &mrd.reps_h {
        for f in &ysol.basis {
            let mut values = vec![IntPoly::zero(mrd.rank()); x.num_vertices()];
            for (j, &xv) in yv.iter().enumerate() {
                let target = mrd.vertex_of(mrd.weyl.mul(w, mrd.reps_l[xv]));
                blocks.insert(target);
                values[target] = translate(mrd, w, &f.values[j]);
            }
            images.push(PiecewiseClass::new(values));
        }
    }
    rep.push("blocks cover X", blocks.len() == x.num_vertices(), format!("{} blocks of {} points", mrd.reps_h.len(), yv.len()));
    let mut bad = 0;
    let mut bad2 = 0;
    let mut first = None;
    for f in &images {
        let v = f.is_member(&x)?;
        if !v.member {
            bad += 1;
            if first.is_none() {
                first = v.failure.map(|fl| fl.description);
            }
        }
        if !f.is_member(&x2)?.member {
            bad2 += 1;
        }
    }
    rep.push(
        "translated classes satisfy Type 2 congruences",
        bad2 == 0,
        format!("{} of {} fail", bad2, images.len()),
    );
    rep.push(
        "translated classes satisfy all congruences of X",
        bad == 0,
        match first {
            Some(d) => format!("{bad} of {} fail; first: {d}", images.len()),
            None => format!("all {} pass", images.len()),
        },
    );
    let xrank = gkm::invariant_rank_in_window(&x, &[], &window)?;
    let prod = mrd.reps_h.len() * ysol.rank;
    rep.push(
        "rank bookkeeping",
        prod == xrank,
        format!("|W^H| * rank(Y) = {} * {} = {prod}, rank(X) = {xrank}", mrd.reps_h.len(), ysol.rank),
    );
    Ok(rep)
}

/// Result of the `G`-equivariant comparison.
#[derive(Clone, Debug)]
pub struct GEquivariant {
    pub invariants: gkm::WindowSolution,
    pub model_rank: usize,
    pub report: Report,
}

/// `W_H`-invariant window members of the `Y` graph, compared with the span
/// of the classes `chi^s * orbit-sum(chi^t)` for `s` in the split lattice and
/// `t` in the fixed lattice.
pub fn g_equivariant_k(mrd: &MinimalRankDatum, b: i64) -> Result<GEquivariant> {
    let mut rep = Report::new(format!("G-equivariant K-theory at B = {b}"));
    let y = mrd.build_gkm_y()?;
    let group: Vec<Automorphism> = y.autos().to_vec();
    let mats: Vec<IntMatrix> = group.iter().map(|a| a.mat.clone()).collect();
    let window = Window::closed_cube(mrd.rank(), b, &mats);
    let inv = gkm::invariants_in_window(&y, &group, window.clone())?;
    let r = mrd.rank();
    let split = &mrd.restricted.basis;
    let minus: Vec<Vec<i64>> = (0..r).map(|i| (0..r).map(|j| mrd.theta.theta[i][j] - i64::from(i == j)).collect()).collect();
    let fixed = rootdata::echelon_basis(&linalg::integer_kernel_small(&minus, r), r);
    let combined: IntMatrix = split.iter().chain(&fixed).cloned().collect();
    let yv = mrd.y_vertices();
    let elem_of: Vec<usize> = yv
        .iter()
        .map(|&xv| *mrd.w_h.iter().find(|&&h| mrd.vertex_of(h) == xv).expect("Y vertex"))
        .collect();
    let mut model = Vec::new();
    for e in window.exps() {
        let Some(c) = solve_square(&combined, e) else { continue };
        let s: Vec<i64> = (0..r).map(|i| c[..split.len()].iter().zip(split).map(|(x, v)| x * v[i]).sum()).collect();
        let t: Vec<i64> = e.iter().zip(&s).map(|(a, b)| a - b).collect();
        let orbit: BTreeSet<Vec<i64>> = mrd.w_h.iter().map(|&h| linalg::mat_vec(&mrd.weyl.element(h).mat, &t)).collect();
        let mut base = IntPoly::zero(r);
        for o in &orbit {
            base.add_term(s.iter().zip(o).map(|(a, b)| a + b).collect(), BigInt::from(1));
        }
        let values: Vec<IntPoly> = elem_of.iter().map(|&h| translate(mrd, h, &base)).collect();
        let f = PiecewiseClass::new(values);
        if inv.flatten(&f).is_some() {
            model.push(f);
        }
    }
    let width = yv.len() * window.len();
    let rows: Vec<Vec<BigInt>> = model.iter().map(|f| inv.flatten(f).expect("in window")).collect();
    let model_rank = linalg::row_hnf(&rows, width).len();
    let contained = model.iter().all(|f| inv.contains(f));
    rep.push("model classes are invariant members", contained, format!("{} model classes", model.len()));
    rep.push(
        "invariant rank equals model rank",
        inv.rank == model_rank,
        format!("invariants {}, model {}", inv.rank, model_rank),
    );
    rep.push("model spans the invariants", contained && inv.span_equals(&model), "");
    if let Some(h) = &mrd.h_datum {
        let wh = WeylGroup::generate(h, rootdata::DEFAULT_WEYL_BOUND)?;
        let fam = rootdata::steinberg_basis(h, &wh)?;
        rootdata::validate_steinberg(&wh, &fam, 1)?;
        rep.push(
            "Steinberg count",
            wh.len() == mrd.w_h.len(),
            format!("{} basis elements over invariants, |W_H| = {}", fam.len(), mrd.w_h.len()),
        );
    }
    Ok(GEquivariant { invariants: inv, model_rank, report: rep })
}

/// Structural checks of a minimal-rank datum and its graphs.
pub fn structure_report(mrd: &MinimalRankDatum) -> Result<Report> {
    let mut rep = Report::new("minimal-rank structure");
    rep.push(
        "exact sequence orders",
        mrd.w_h.len() == mrd.w_l.len() * mrd.restricted.weyl.len(),
        format!("|W_H| = {}, |W_L| = {}, |W_G/H| = {}", mrd.w_h.len(), mrd.w_l.len(), mrd.restricted.weyl.len()),
    );
    // p(i(x)) = 2x on the split lattice, with i the inclusion and p = 1 - theta
    let sq = mrd.restricted.basis.iter().all(|v| {
        let t = mrd.theta.apply(v);
        v.iter().zip(&t).all(|(a, b)| a - b == 2 * a)
    });
    rep.push("squaring on the split lattice", sq, "");
    let x = mrd.build_gkm_x()?;
    let y = mrd.build_gkm_y()?;
    rep.push("X vertices", x.num_vertices() == mrd.reps_l.len(), format!("{}", x.num_vertices()));
    let anti = y.edges().iter().all(|e| {
        let t = mrd.theta.apply(&e.chi);
        t.iter().zip(&e.chi).all(|(a, b)| *a == -b)
    });
    rep.push("Type 2 labels are theta-antisymmetric", anti, "");
    let yv = mrd.y_vertices();
    let xe = edge_keys(&x);
    let induced = edge_keys(&y).into_iter().all(|(a, b, c, n)| xe.contains(&(yv[a], yv[b], c, n)));
    rep.push("Y is a subgraph of X", induced, format!("{} curves in Y", y.edges().len()));
    Ok(rep)
}
