//! Root data, Weyl group enumeration, involutions and restricted roots.

use std::collections::{BTreeMap, BTreeSet, HashMap, VecDeque};

use num_bigint::BigInt;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::linalg::{self, IntMatrix};
use crate::IntPoly;

pub const DEFAULT_WEYL_BOUND: usize = 10080;

/// Simple roots in a character lattice with their coroots (vectors in the
/// dual lattice, paired by the dot product).
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RootDatum {
    rank: usize,
    simple_roots: Vec<Vec<i64>>,
    simple_coroots: Vec<Vec<i64>>,
    /// `cartan[i][j] = <alpha_j, alpha_i^vee>`.
    cartan: IntMatrix,
    fundamental_weights: Option<Vec<Vec<i64>>>,
    roots: Vec<Root>,
    root_index: HashMap<Vec<i64>, usize>,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Root {
    pub vector: Vec<i64>,
    /// Coordinates in the simple roots.
    pub coeffs: Vec<i64>,
}

impl Root {
    pub fn is_positive(&self) -> bool {
        self.coeffs.iter().all(|&c| c >= 0)
    }
}

#[derive(Serialize, Deserialize)]
struct DatumJson {
    rank: usize,
    simple_roots: Vec<Vec<i64>>,
    cartan: IntMatrix,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    simple_coroots: Option<Vec<Vec<i64>>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    fundamental_weights: Option<Vec<Vec<i64>>>,
}

fn dot(a: &[i64], b: &[i64]) -> i64 {
    a.iter().zip(b).map(|(x, y)| x * y).sum()
}

impl RootDatum {
    /// Coroots are derived from the Cartan matrix when the simple roots form
    /// a basis of the lattice; otherwise they must be supplied.
    pub fn new(
        rank: usize,
        simple_roots: Vec<Vec<i64>>,
        cartan: IntMatrix,
        simple_coroots: Option<Vec<Vec<i64>>>,
        fundamental_weights: Option<Vec<Vec<i64>>>,
    ) -> Result<Self> {
        let l = simple_roots.len();
        let bad = |m: &str| Err(Error::InvalidRootDatum(m.to_string()));
        if rank == 0 || l == 0 {
            return bad("rank and number of simple roots must be positive");
        }
        if simple_roots.iter().any(|a| a.len() != rank) {
            return bad("simple root length differs from the lattice rank");
        }
        if cartan.len() != l || cartan.iter().any(|r| r.len() != l) {
            return bad("Cartan matrix must be square of size #simple roots");
        }
        for i in 0..l {
            for j in 0..l {
                if (i == j && cartan[i][j] != 2) || (i != j && cartan[i][j] > 0) {
                    return bad("Cartan matrix needs diagonal 2 and nonpositive off-diagonal entries");
                }
            }
        }
        if linalg::rank_small(&simple_roots) != l {
            return bad("simple roots are linearly dependent");
        }
        let coroots = match simple_coroots {
            Some(c) => c,
            None => {
                if l != rank {
                    return bad("simple_coroots are required when the simple roots do not span the lattice");
                }
                // rows alpha_j; solve S c_i = cartan row i
                let inv = linalg::inverse_unimodular(&simple_roots);
                let s = &simple_roots;
                let mut out = Vec::new();
                for i in 0..l {
                    let c = match &inv {
                        Some(inv) => linalg::mat_vec(inv, &cartan[i]),
                        None => solve_integral(s, &cartan[i]).ok_or_else(|| {
                            Error::InvalidRootDatum("coroots are not integral; supply simple_coroots".into())
                        })?,
                    };
                    out.push(c);
                }
                out
            }
        };
        if coroots.len() != l || coroots.iter().any(|c| c.len() != rank) {
            return bad("coroot list has the wrong shape");
        }
        for i in 0..l {
            for j in 0..l {
                if dot(&simple_roots[j], &coroots[i]) != cartan[i][j] {
                    return bad("coroots do not reproduce the Cartan matrix");
                }
            }
        }
        if let Some(w) = &fundamental_weights {
            if w.len() != l || w.iter().any(|x| x.len() != rank) {
                return bad("fundamental weight list has the wrong shape");
            }
            for i in 0..l {
                for j in 0..l {
                    if dot(&w[i], &coroots[j]) != i64::from(i == j) {
                        return bad("fundamental weights are not dual to the coroots");
                    }
                }
            }
        }
        let mut d = RootDatum {
            rank,
            simple_roots,
            simple_coroots: coroots,
            cartan,
            fundamental_weights,
            roots: Vec::new(),
            root_index: HashMap::new(),
        };
        d.generate_roots()?;
        Ok(d)
    }

    fn generate_roots(&mut self) -> Result<()> {
        let l = self.simple_roots.len();
        let mut roots: Vec<Root> = Vec::new();
        let mut index: HashMap<Vec<i64>, usize> = HashMap::new();
        let mut queue: VecDeque<usize> = VecDeque::new();
        for i in 0..l {
            let mut c = vec![0; l];
            c[i] = 1;
            index.insert(self.simple_roots[i].clone(), roots.len());
            queue.push_back(roots.len());
            roots.push(Root { vector: self.simple_roots[i].clone(), coeffs: c });
        }
        while let Some(k) = queue.pop_front() {
            for i in 0..l {
                let r = &roots[k];
                let p = dot(&r.vector, &self.simple_coroots[i]);
                let v: Vec<i64> = r.vector.iter().zip(&self.simple_roots[i]).map(|(a, b)| a - p * b).collect();
                let mut c = r.coeffs.clone();
                c[i] -= p;
                if !index.contains_key(&v) {
                    if roots.len() > 100_000 {
                        return Err(Error::InvalidRootDatum("root system is not finite".into()));
                    }
                    if !(c.iter().all(|&x| x >= 0) || c.iter().all(|&x| x <= 0)) {
                        return Err(Error::InvalidRootDatum("Cartan data does not define a root system".into()));
                    }
                    index.insert(v.clone(), roots.len());
                    queue.push_back(roots.len());
                    roots.push(Root { vector: v, coeffs: c });
                }
            }
        }
        roots.sort_by_key(|r| {
            let h: i64 = r.coeffs.iter().sum();
            (h < 0, h.abs(), r.coeffs.iter().map(|c| c.abs()).collect::<Vec<_>>())
        });
        self.root_index = roots.iter().enumerate().map(|(i, r)| (r.vector.clone(), i)).collect();
        self.roots = roots;
        Ok(())
    }

    pub fn from_json(v: &serde_json::Value) -> Result<Self> {
        let d: DatumJson = serde_json::from_value(v.clone())?;
        Self::new(d.rank, d.simple_roots, d.cartan, d.simple_coroots, d.fundamental_weights)
    }

    pub fn to_json(&self) -> serde_json::Value {
        serde_json::to_value(DatumJson {
            rank: self.rank,
            simple_roots: self.simple_roots.clone(),
            cartan: self.cartan.clone(),
            simple_coroots: Some(self.simple_coroots.clone()),
            fundamental_weights: self.fundamental_weights.clone(),
        })
        .expect("datum serializes")
    }

    pub fn rank(&self) -> usize {
        self.rank
    }

    pub fn num_simple(&self) -> usize {
        self.simple_roots.len()
    }

    pub fn simple_roots(&self) -> &[Vec<i64>] {
        &self.simple_roots
    }

    pub fn simple_coroots(&self) -> &[Vec<i64>] {
        &self.simple_coroots
    }

    pub fn cartan(&self) -> &IntMatrix {
        &self.cartan
    }

    pub fn fundamental_weights(&self) -> Option<&[Vec<i64>]> {
        self.fundamental_weights.as_deref()
    }

    pub fn roots(&self) -> &[Root] {
        &self.roots
    }

    pub fn positive_roots(&self) -> Vec<&Root> {
        self.roots.iter().filter(|r| r.is_positive()).collect()
    }

    pub fn root(&self, v: &[i64]) -> Option<&Root> {
        self.root_index.get(v).map(|&i| &self.roots[i])
    }

    pub fn is_root(&self, v: &[i64]) -> bool {
        self.root_index.contains_key(v)
    }

    /// Pairing of a character with the coroot of a root (computed through
    /// the simple reflection that sends it to a simple root).
    pub fn coroot_of(&self, alpha: &[i64]) -> Option<Vec<i64>> {
        // find w with w(alpha) simple; then alpha^vee = w^{-1} (simple^vee)
        let w = WeylGroup::generate(self, DEFAULT_WEYL_BOUND).ok()?;
        for e in w.elements() {
            let img = linalg::mat_vec(&e.mat, alpha);
            if let Some(i) = self.simple_roots.iter().position(|s| *s == img) {
                // <v, alpha^vee> = <w v, alpha_i^vee>, so alpha^vee = w^T alpha_i^vee
                let wt = linalg::transpose(&e.mat);
                return Some(linalg::mat_vec(&wt, &self.simple_coroots[i]));
            }
        }
        None
    }

    /// Matrix of the simple reflection `s_i` acting on characters.
    pub fn reflection(&self, i: usize) -> IntMatrix {
        let a = &self.simple_roots[i];
        let c = &self.simple_coroots[i];
        (0..self.rank)
            .map(|r| (0..self.rank).map(|k| i64::from(r == k) - a[r] * c[k]).collect())
            .collect()
    }

    /// Reflection in an arbitrary root.
    pub fn root_reflection(&self, alpha: &[i64]) -> Option<IntMatrix> {
        let c = self.coroot_of(alpha)?;
        Some(
            (0..self.rank)
                .map(|r| (0..self.rank).map(|k| i64::from(r == k) - alpha[r] * c[k]).collect())
                .collect(),
        )
    }

    pub fn is_positive_root(&self, v: &[i64]) -> bool {
        self.root(v).is_some_and(Root::is_positive)
    }
}

fn solve_integral(rows: &[Vec<i64>], rhs: &[i64]) -> Option<Vec<i64>> {
    // rows * x = rhs for a square nonsingular integer system (Cramer)
    let n = rows.len();
    let d = linalg::det(&rows.to_vec());
    if d == 0 {
        return None;
    }
    let mut x = Vec::with_capacity(n);
    for i in 0..n {
        let mut m = rows.to_vec();
        for (r, row) in m.iter_mut().enumerate() {
            row[i] = rhs[r];
        }
        let di = linalg::det(&m);
        if di % d != 0 {
            return None;
        }
        x.push(di / d);
    }
    Some(x)
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct WeylElement {
    pub mat: IntMatrix,
    /// Lexicographically least reduced word in the simple reflections.
    pub word: Vec<usize>,
}

impl WeylElement {
    pub fn length(&self) -> usize {
        self.word.len()
    }
}

/// All elements of the Weyl group, ordered by length and then by reduced
/// word; index 0 is the identity.
#[derive(Clone, Debug)]
pub struct WeylGroup {
    elements: Vec<WeylElement>,
    index: HashMap<IntMatrix, usize>,
    generators: Vec<IntMatrix>,
}

impl WeylGroup {
    pub fn generate(datum: &RootDatum, bound: usize) -> Result<Self> {
        let gens: Vec<IntMatrix> = (0..datum.num_simple()).map(|i| datum.reflection(i)).collect();
        let id = linalg::identity(datum.rank());
        let mut elements = vec![WeylElement { mat: id.clone(), word: vec![] }];
        let mut index = HashMap::from([(id, 0usize)]);
        let mut k = 0;
        while k < elements.len() {
            for (i, s) in gens.iter().enumerate() {
                let m = linalg::mat_mul(&elements[k].mat, s);
                if !index.contains_key(&m) {
                    if elements.len() >= bound {
                        return Err(Error::WeylBoundExceeded(bound));
                    }
                    let mut word = elements[k].word.clone();
                    word.push(i);
                    index.insert(m.clone(), elements.len());
                    elements.push(WeylElement { mat: m, word });
                }
            }
            k += 1;
        }
        Ok(Self { elements, index, generators: gens })
    }

    pub fn len(&self) -> usize {
        self.elements.len()
    }

    pub fn is_empty(&self) -> bool {
        self.elements.is_empty()
    }

    pub fn elements(&self) -> &[WeylElement] {
        &self.elements
    }

    pub fn element(&self, i: usize) -> &WeylElement {
        &self.elements[i]
    }

    pub fn find(&self, m: &IntMatrix) -> Option<usize> {
        self.index.get(m).copied()
    }

    pub fn mul(&self, a: usize, b: usize) -> usize {
        self.index[&linalg::mat_mul(&self.elements[a].mat, &self.elements[b].mat)]
    }

    pub fn inverse(&self, a: usize) -> usize {
        (0..self.len()).find(|&b| self.mul(a, b) == 0).expect("group element has an inverse")
    }

    pub fn simple(&self, i: usize) -> usize {
        self.index[&self.generators[i]]
    }

    pub fn longest(&self) -> usize {
        self.len() - 1
    }

    /// Closure of the given elements under multiplication.
    pub fn subgroup_generated(&self, gens: &[usize]) -> Vec<usize> {
        let mut seen: BTreeSet<usize> = BTreeSet::from([0]);
        let mut todo = vec![0usize];
        while let Some(x) = todo.pop() {
            for &g in gens {
                let y = self.mul(x, g);
                if seen.insert(y) {
                    todo.push(y);
                }
            }
        }
        seen.into_iter().collect()
    }

    pub fn is_subgroup(&self, sub: &[usize]) -> bool {
        let set: BTreeSet<usize> = sub.iter().copied().collect();
        set.contains(&0) && sub.iter().all(|&a| sub.iter().all(|&b| set.contains(&self.mul(a, b))))
    }

    /// One representative of minimal length per left coset `w W_sub`, ties
    /// broken by the lexicographically least reduced word; sorted likewise.
    pub fn minimal_coset_reps(&self, sub: &[usize]) -> Result<Vec<usize>> {
        if !self.is_subgroup(sub) {
            return Err(Error::NotSubgroup("elements are not closed under multiplication".into()));
        }
        let mut seen: BTreeSet<usize> = BTreeSet::new();
        let mut reps = Vec::new();
        // elements are already sorted by (length, word)
        for w in 0..self.len() {
            if seen.contains(&w) {
                continue;
            }
            reps.push(w);
            for &h in sub {
                seen.insert(self.mul(w, h));
            }
        }
        Ok(reps)
    }

    /// Coset key of `w W_sub`: the smallest index in the coset.
    pub fn coset_rep(&self, w: usize, sub: &[usize]) -> usize {
        sub.iter().map(|&h| self.mul(w, h)).min().unwrap()
    }
}

/// A lattice involution acting on characters.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Involution {
    pub theta: IntMatrix,
}

impl Involution {
    pub fn new(datum: &RootDatum, theta: IntMatrix) -> Result<Self> {
        let r = datum.rank();
        if theta.len() != r || theta.iter().any(|row| row.len() != r) {
            return Err(Error::Dimension("involution must be a square matrix of the lattice rank".into()));
        }
        if linalg::mat_mul(&theta, &theta) != linalg::identity(r) {
            return Err(Error::InvalidRootDatum("theta does not square to the identity".into()));
        }
        if datum.roots().iter().any(|a| !datum.is_root(&linalg::mat_vec(&theta, &a.vector))) {
            return Err(Error::InvalidRootDatum("theta does not permute the roots".into()));
        }
        Ok(Self { theta })
    }

    pub fn apply(&self, v: &[i64]) -> Vec<i64> {
        linalg::mat_vec(&self.theta, v)
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ThetaPartition {
    /// Indices of simple roots in `Delta_L`.
    pub delta_l: Vec<usize>,
    /// Indices of simple roots sent to negative roots.
    pub delta_minus: Vec<usize>,
    pub phi_l_pos: Vec<Vec<i64>>,
    pub phi_minus: Vec<Vec<i64>>,
}

pub fn theta_partition(datum: &RootDatum, theta: &Involution) -> Result<ThetaPartition> {
    let neg = |v: &[i64]| !datum.is_positive_root(&theta.apply(v));
    let l = datum.num_simple();
    let delta_minus: Vec<usize> = (0..l).filter(|&i| neg(&datum.simple_roots()[i])).collect();
    let delta_l: Vec<usize> = (0..l).filter(|i| !delta_minus.contains(i)).collect();
    let pos = datum.positive_roots();
    let phi_minus: Vec<Vec<i64>> = pos.iter().filter(|r| neg(&r.vector)).map(|r| r.vector.clone()).collect();
    if phi_minus.is_empty() {
        return Err(Error::IncompatibleInvolution("no positive root is sent to a negative root".into()));
    }
    let phi_l_pos: Vec<Vec<i64>> = pos
        .iter()
        .filter(|r| delta_minus.iter().all(|&i| r.coeffs[i] == 0))
        .map(|r| r.vector.clone())
        .collect();
    // the two families must partition the positive roots
    let overlap = phi_l_pos.iter().any(|v| phi_minus.contains(v));
    if overlap || phi_l_pos.len() + phi_minus.len() != pos.len() {
        return Err(Error::IncompatibleInvolution(format!(
            "{} positive roots, {} sent negative, {} in the Levi part",
            pos.len(),
            phi_minus.len(),
            phi_l_pos.len()
        )));
    }
    Ok(ThetaPartition { delta_l, delta_minus, phi_l_pos, phi_minus })
}

/// `{w : theta w = w theta}`.
pub fn theta_centralizer(w: &WeylGroup, theta: &Involution) -> Vec<usize> {
    (0..w.len())
        .filter(|&i| {
            let m = &w.element(i).mat;
            linalg::mat_mul(&theta.theta, m) == linalg::mat_mul(m, &theta.theta)
        })
        .collect()
}

/// The restricted root system on the split sublattice.
#[derive(Clone, Debug)]
pub struct RestrictedRoots {
    /// Restricted roots `alpha - theta(alpha)` as characters of `T`.
    pub roots: Vec<Vec<i64>>,
    /// Images of the simple roots sent negative, deduplicated.
    pub simple: Vec<Vec<i64>>,
    /// Echelon basis (rows) of the lattice spanned by the restricted roots.
    pub basis: IntMatrix,
    /// `W_{G/H}` as matrices on coordinates with respect to `basis`.
    pub weyl: Vec<IntMatrix>,
    /// For each element of `W_H` (in the given order), its image in `weyl`.
    pub weyl_of: Vec<usize>,
}

impl RestrictedRoots {
    pub fn rank(&self) -> usize {
        self.basis.len()
    }

    /// Coordinates of a character of the split sublattice in `basis`.
    pub fn coords(&self, v: &[i64]) -> Option<Vec<i64>> {
        lattice_coords(&self.basis, v)
    }
}

/// Coordinates of `v` in the lattice spanned by echelon rows `basis`.
pub fn lattice_coords(basis: &IntMatrix, v: &[i64]) -> Option<Vec<i64>> {
    let mut r = v.to_vec();
    let mut out = Vec::with_capacity(basis.len());
    for row in basis {
        let c = row.iter().position(|&x| x != 0)?;
        if r[..c].iter().any(|&x| x != 0) || r[c] % row[c] != 0 {
            return None;
        }
        let q = r[c] / row[c];
        for (x, y) in r.iter_mut().zip(row) {
            *x -= q * y;
        }
        out.push(q);
    }
    r.iter().all(|&x| x == 0).then_some(out)
}

pub fn echelon_basis(rows: &[Vec<i64>], ncols: usize) -> IntMatrix {
    let big: Vec<Vec<BigInt>> = rows.iter().map(|r| r.iter().map(|&x| BigInt::from(x)).collect()).collect();
    linalg::row_hnf(&big, ncols)
        .into_iter()
        .map(|r| r.iter().map(|x| i64::try_from(x).expect("small lattice basis")).collect())
        .collect()
}

pub fn restricted_roots(
    datum: &RootDatum,
    theta: &Involution,
    part: &ThetaPartition,
    w: &WeylGroup,
    w_h: &[usize],
) -> Result<RestrictedRoots> {
    let gamma = |a: &[i64]| -> Vec<i64> {
        let t = theta.apply(a);
        a.iter().zip(&t).map(|(x, y)| x - y).collect()
    };
    let mut set: BTreeSet<Vec<i64>> = BTreeSet::new();
    for a in &part.phi_minus {
        let g = gamma(a);
        set.insert(g.iter().map(|x| -x).collect());
        set.insert(g);
    }
    let roots: Vec<Vec<i64>> = set.into_iter().collect();
    // reducedness: no restricted root is a proper multiple of another
    for a in &roots {
        for b in &roots {
            if a != b {
                let (p, _) = crate::charlat::primitive_part(a)?;
                let (q, _) = crate::charlat::primitive_part(b)?;
                if p == q {
                    return Err(Error::NonReduced);
                }
            }
        }
    }
    let mut simple: Vec<Vec<i64>> = Vec::new();
    for &i in &part.delta_minus {
        let g = gamma(&datum.simple_roots()[i]);
        if !simple.contains(&g) {
            simple.push(g);
        }
    }
    let basis = echelon_basis(&roots, datum.rank());
    let mut weyl: Vec<IntMatrix> = Vec::new();
    let mut weyl_of = Vec::new();
    for &h in w_h {
        let m = &w.element(h).mat;
        let cols: Vec<Vec<i64>> = basis
            .iter()
            .map(|b| lattice_coords(&basis, &linalg::mat_vec(m, b)).expect("W_H preserves the split lattice"))
            .collect();
        let mat = linalg::transpose(&cols);
        let k = match weyl.iter().position(|x| *x == mat) {
            Some(k) => k,
            None => {
                weyl.push(mat);
                weyl.len() - 1
            }
        };
        weyl_of.push(k);
    }
    Ok(RestrictedRoots { roots, simple, basis, weyl, weyl_of })
}

/// The standard Steinberg family `e_v = v^{-1}(prod of fundamental weights
/// lambda_i over i with v^{-1}(alpha_i) < 0)`, indexed like `w`.
pub fn steinberg_basis(datum: &RootDatum, w: &WeylGroup) -> Result<Vec<Vec<i64>>> {
    let lambdas = datum.fundamental_weights().ok_or(Error::MissingWeights)?;
    let mut out = Vec::with_capacity(w.len());
    for v in 0..w.len() {
        let vinv = &w.element(w.inverse(v)).mat;
        let mut e = vec![0; datum.rank()];
        for (i, a) in datum.simple_roots().iter().enumerate() {
            if !datum.is_positive_root(&linalg::mat_vec(vinv, a)) {
                for (x, y) in e.iter_mut().zip(&lambdas[i]) {
                    *x += y;
                }
            }
        }
        out.push(linalg::mat_vec(vinv, &e));
    }
    Ok(out)
}

/// Determinant of a matrix of Laurent polynomials (Bareiss elimination with
/// exact division).
pub fn poly_det(m: &[Vec<IntPoly>]) -> IntPoly {
    let n = m.len();
    let rank = m[0][0].rank();
    let mut a: Vec<Vec<IntPoly>> = m.to_vec();
    let mut sign = false;
    let mut prev = IntPoly::one(rank);
    for k in 0..n {
        if a[k][k].is_zero() {
            match (k + 1..n).find(|&i| !a[i][k].is_zero()) {
                Some(i) => {
                    a.swap(i, k);
                    sign = !sign;
                }
                None => return IntPoly::zero(rank),
            }
        }
        for i in k + 1..n {
            for j in k + 1..n {
                let num = &(&a[i][j] * &a[k][k]) - &(&a[i][k] * &a[k][j]);
                a[i][j] = num.exact_div(&prev).expect("same rank").expect("Bareiss division is exact");
            }
        }
        prev = a[k][k].clone();
    }
    let d = a[n - 1][n - 1].clone();
    if sign {
        -d
    } else {
        d
    }
}

/// Validate a Steinberg family: the matrix `(w e_v)` has nonzero determinant
/// and every monomial in `[-b, b]^rank` is an invariant-coefficient
/// combination of the family (Cramer's rule with exact division).
pub fn validate_steinberg(w: &WeylGroup, family: &[Vec<i64>], b: i64) -> Result<()> {
    let n = w.len();
    let distinct: BTreeSet<&Vec<i64>> = family.iter().collect();
    if distinct.len() != n {
        return Err(Error::SteinbergInvalid("family elements are not distinct".into()));
    }
    let rank = family[0].len();
    let matrix: Vec<Vec<IntPoly>> = (0..n)
        .map(|x| family.iter().map(|e| IntPoly::character(&linalg::mat_vec(&w.element(x).mat, e))).collect())
        .collect();
    let d = poly_det(&matrix);
    if d.is_zero() {
        return Err(Error::SteinbergInvalid("the matrix (w e_v) is singular".into()));
    }
    let window = crate::gkm::Window::cube(rank, b);
    for m in window.exps() {
        for v in 0..n {
            let mut mv = matrix.clone();
            for (x, row) in mv.iter_mut().enumerate() {
                row[v] = IntPoly::character(&linalg::mat_vec(&w.element(x).mat, m));
            }
            let coef = poly_det(&mv)
                .exact_div(&d)?
                .ok_or_else(|| Error::SteinbergInvalid(format!("monomial {m:?} is not in the span")))?;
            for x in 0..n {
                if coef.apply_lattice_map(&w.element(x).mat)? != coef {
                    return Err(Error::SteinbergInvalid(format!("coefficient for {m:?} is not invariant")));
                }
            }
        }
    }
    Ok(())
}

/// Order of the subgroup generated by the listed simple reflections.
pub fn parabolic_subgroup(w: &WeylGroup, simple: &[usize]) -> Vec<usize> {
    let gens: Vec<usize> = simple.iter().map(|&i| w.simple(i)).collect();
    w.subgroup_generated(&gens)
}

/// Named bundled instances: `(datum JSON, involution JSON)`.
pub fn bundled(name: &str) -> Option<(&'static str, &'static str)> {
    match name {
        "A1xA1-swap" => Some((
            include_str!("../data/a1xa1_swap.datum.json"),
            include_str!("../data/a1xa1_swap.theta.json"),
        )),
        "A3-psp" => Some((
            include_str!("../data/a3_psp.datum.json"),
            include_str!("../data/a3_psp.theta.json"),
        )),
        "D2-pso" => Some((
            include_str!("../data/d2_pso.datum.json"),
            include_str!("../data/d2_pso.theta.json"),
        )),
        _ => None,
    }
}

pub const BUNDLED: [&str; 3] = ["A1xA1-swap", "A3-psp", "D2-pso"];

/// Cartan-type catalog used in tests and examples.
pub fn type_a(n: usize) -> RootDatum {
    // weight coordinates: alpha_i = column i of the Cartan matrix
    let mut cartan = vec![vec![0; n]; n];
    for i in 0..n {
        cartan[i][i] = 2;
        if i + 1 < n {
            cartan[i][i + 1] = -1;
            cartan[i + 1][i] = -1;
        }
    }
    let roots: Vec<Vec<i64>> = (0..n).map(|j| (0..n).map(|i| cartan[i][j]).collect()).collect();
    RootDatum::new(n, roots, cartan, Some(linalg::identity(n)), Some(linalg::identity(n))).expect("type A datum")
}

/// A helper for reporting: group elements as words like `s1s2`.
pub fn word_label(word: &[usize]) -> String {
    if word.is_empty() {
        return "e".into();
    }
    word.iter().map(|i| format!("s{}", i + 1)).collect()
}

/// Map each element to its permutation of the roots (index list).
pub fn root_permutation(datum: &RootDatum, m: &IntMatrix) -> Option<Vec<usize>> {
    let idx: BTreeMap<&Vec<i64>, usize> = datum.roots().iter().enumerate().map(|(i, r)| (&r.vector, i)).collect();
    datum.roots().iter().map(|r| idx.get(&linalg::mat_vec(m, &r.vector)).copied()).collect()
}
