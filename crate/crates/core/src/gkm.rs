//! GKM graphs with curve edges and surface cells, the membership test for
//! piecewise classes, graph automorphisms, invariants on exponent windows and
//! quotient presentations.

use std::collections::{BTreeMap, BTreeSet, HashMap};
use std::fmt::Write as _;

use num_bigint::BigInt;
use rayon::prelude::*;
use serde_json::{json, Value};

use crate::charlat::{canonical_sign, is_primitive, normalize_congruence, LaurentPoly};
use crate::error::{Error, Result};
use crate::linalg::{self, IntMatrix, SparseKernel};
use crate::scalar::Coeff;

/// `f_u - f_v` must be divisible by `1 - chi^n`.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Edge {
    pub u: usize,
    pub v: usize,
    pub chi: Vec<i64>,
    pub n: i64,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum CellKind {
    P2,
    P1xP1,
    Fn(i64),
}

impl CellKind {
    pub fn name(&self) -> &'static str {
        match self {
            CellKind::P2 => "P2",
            CellKind::P1xP1 => "P1xP1",
            CellKind::Fn(_) => "Fn",
        }
    }

    pub fn vertex_count(&self) -> usize {
        match self {
            CellKind::P2 => 3,
            _ => 4,
        }
    }
}

/// A T-stable surface through the listed fixed points. Vertices are ordered
/// `(x, y, z)` for P2 and `(x, y, z, w)` otherwise.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SurfaceCell {
    pub kind: CellKind,
    pub verts: Vec<usize>,
    pub chi: Vec<i64>,
}

impl SurfaceCell {
    /// The pairwise congruences imposed by the cell as `(u, v, exponent)`,
    /// all with respect to the cell character.
    pub fn clauses(&self) -> Vec<(usize, usize, i64)> {
        let v = &self.verts;
        match self.kind {
            CellKind::P2 => vec![(v[0], v[1], 1), (v[0], v[2], 1), (v[1], v[2], 2)],
            CellKind::P1xP1 => vec![(v[0], v[1], 1), (v[1], v[2], 1), (v[2], v[3], 1), (v[3], v[0], 1)],
            CellKind::Fn(n) => vec![(v[0], v[1], 1), (v[2], v[3], 1), (v[1], v[2], 2 * n), (v[0], v[3], n)],
        }
    }
}

/// A vertex permutation together with a lattice automorphism; `perm[x]` is
/// the image of vertex `x`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Automorphism {
    pub perm: Vec<usize>,
    pub mat: IntMatrix,
}

impl Automorphism {
    pub fn identity(vertices: usize, rank: usize) -> Self {
        Self { perm: (0..vertices).collect(), mat: linalg::identity(rank) }
    }

    pub fn compose(&self, other: &Self) -> Self {
        // self after other
        Self {
            perm: other.perm.iter().map(|&x| self.perm[x]).collect(),
            mat: linalg::mat_mul(&self.mat, &other.mat),
        }
    }
}

/// Where a congruence comes from.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Source {
    Edge(usize),
    Cell(usize),
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Constraint {
    pub u: usize,
    pub v: usize,
    pub chi: Vec<i64>,
    pub n: i64,
    pub source: Source,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct GkmGraph {
    rank: usize,
    vertices: Vec<String>,
    edges: Vec<Edge>,
    cells: Vec<SurfaceCell>,
    autos: Vec<Automorphism>,
}

impl GkmGraph {
    pub fn new(rank: usize, vertices: Vec<String>) -> Result<Self> {
        if rank == 0 {
            return Err(Error::Dimension("character lattice must have rank >= 1".into()));
        }
        let distinct: BTreeSet<&String> = vertices.iter().collect();
        if distinct.len() != vertices.len() {
            return Err(Error::InvalidGraph("duplicate vertex labels".into()));
        }
        Ok(Self { rank, vertices, edges: Vec::new(), cells: Vec::new(), autos: Vec::new() })
    }

    pub fn rank(&self) -> usize {
        self.rank
    }

    pub fn vertices(&self) -> &[String] {
        &self.vertices
    }

    pub fn num_vertices(&self) -> usize {
        self.vertices.len()
    }

    pub fn edges(&self) -> &[Edge] {
        &self.edges
    }

    pub fn cells(&self) -> &[SurfaceCell] {
        &self.cells
    }

    pub fn autos(&self) -> &[Automorphism] {
        &self.autos
    }

    pub fn vertex_index(&self, label: &str) -> Option<usize> {
        self.vertices.iter().position(|v| v == label)
    }

    fn check_vertex(&self, x: usize) -> Result<()> {
        if x >= self.vertices.len() {
            return Err(Error::InvalidGraph(format!("vertex index {x} out of range")));
        }
        Ok(())
    }

    /// Add the edge `(u, v, chi^n)`; a non-primitive `chi` is normalized to
    /// its primitive part with the exponent multiplied accordingly.
    pub fn add_edge(&mut self, u: usize, v: usize, chi: &[i64], n: i64) -> Result<()> {
        self.check_vertex(u)?;
        self.check_vertex(v)?;
        if u == v {
            return Err(Error::InvalidGraph(format!("loop at vertex {}", self.vertices[u])));
        }
        if chi.len() != self.rank {
            return Err(Error::LatticeMismatch { expected: self.rank, found: chi.len() });
        }
        let (chi, n) = normalize_congruence(chi, n)?;
        let (a, b) = (u.min(v), u.max(v));
        if self.edges.iter().any(|e| e.u.min(e.v) == a && e.u.max(e.v) == b && e.chi == chi && e.n == n) {
            return Err(Error::InvalidGraph(format!(
                "duplicate edge {}-{}",
                self.vertices[u], self.vertices[v]
            )));
        }
        self.edges.push(Edge { u, v, chi, n });
        Ok(())
    }

    pub fn add_cell(&mut self, kind: CellKind, verts: Vec<usize>, chi: &[i64]) -> Result<()> {
        if verts.len() != kind.vertex_count() {
            return Err(Error::InvalidGraph(format!(
                "{} cell needs {} vertices",
                kind.name(),
                kind.vertex_count()
            )));
        }
        if let CellKind::Fn(n) = kind {
            if n < 1 {
                return Err(Error::NonPositiveExponent(n));
            }
        }
        for &x in &verts {
            self.check_vertex(x)?;
        }
        if verts.iter().collect::<BTreeSet<_>>().len() != verts.len() {
            return Err(Error::InvalidGraph("cell vertices must be distinct".into()));
        }
        if chi.len() != self.rank {
            return Err(Error::LatticeMismatch { expected: self.rank, found: chi.len() });
        }
        if !is_primitive(chi) {
            return Err(Error::NotPrimitive(chi.to_vec()));
        }
        self.cells.push(SurfaceCell { kind, verts, chi: canonical_sign(chi) });
        Ok(())
    }

    /// Register a symmetry after checking it is an automorphism.
    pub fn add_automorphism(&mut self, a: Automorphism) -> Result<()> {
        self.validate_automorphism(&a)?;
        self.autos.push(a);
        Ok(())
    }

    /// Every congruence of the graph: edges first, then cell clauses.
    pub fn constraints(&self) -> Vec<Constraint> {
        let mut out: Vec<Constraint> = self
            .edges
            .iter()
            .enumerate()
            .map(|(i, e)| Constraint { u: e.u, v: e.v, chi: e.chi.clone(), n: e.n, source: Source::Edge(i) })
            .collect();
        for (i, c) in self.cells.iter().enumerate() {
            for (u, v, n) in c.clauses() {
                out.push(Constraint { u, v, chi: c.chi.clone(), n, source: Source::Cell(i) });
            }
        }
        out
    }

    fn describe(&self, c: &Constraint) -> String {
        let what = match &c.source {
            Source::Edge(i) => format!("edge #{}", i + 1),
            Source::Cell(i) => format!("{} cell #{}", self.cells[*i].kind.name(), i + 1),
        };
        format!(
            "{what}: f[{}] - f[{}] mod (1 - chi^{}), chi = {:?}",
            self.vertices[c.u], self.vertices[c.v], c.n, c.chi
        )
    }

    /// Check that `(perm, mat)` maps every edge to an edge and every cell to a
    /// cell of the same kind; the error names the first unmapped item.
    pub fn validate_automorphism(&self, a: &Automorphism) -> Result<()> {
        let nv = self.vertices.len();
        let seen: BTreeSet<usize> = a.perm.iter().copied().collect();
        if a.perm.len() != nv || seen.len() != nv || seen.iter().any(|&x| x >= nv) {
            return Err(Error::NotAutomorphism("vertex map is not a permutation".into()));
        }
        if a.mat.len() != self.rank || a.mat.iter().any(|r| r.len() != self.rank) || linalg::det(&a.mat).abs() != 1 {
            return Err(Error::NotAutomorphism("lattice map is not unimodular".into()));
        }
        let key = |u: usize, v: usize, chi: &[i64], n: i64| {
            let (chi, n) = normalize_congruence(chi, n).expect("nonzero label");
            (u.min(v), u.max(v), chi, n)
        };
        let edge_set: BTreeSet<_> = self.edges.iter().map(|e| key(e.u, e.v, &e.chi, e.n)).collect();
        for e in &self.edges {
            let img = key(a.perm[e.u], a.perm[e.v], &linalg::mat_vec(&a.mat, &e.chi), e.n);
            if !edge_set.contains(&img) {
                return Err(Error::NotAutomorphism(format!(
                    "edge {}-{} (chi = {:?}, n = {}) has no image edge",
                    self.vertices[e.u], self.vertices[e.v], e.chi, e.n
                )));
            }
        }
        let cell_keys: Vec<(CellKind, BTreeSet<_>)> = self
            .cells
            .iter()
            .map(|c| (c.kind, c.clauses().into_iter().map(|(u, v, n)| key(u, v, &c.chi, n)).collect()))
            .collect();
        for (i, c) in self.cells.iter().enumerate() {
            let chi = linalg::mat_vec(&a.mat, &c.chi);
            let img: BTreeSet<_> = c
                .clauses()
                .into_iter()
                .map(|(u, v, n)| key(a.perm[u], a.perm[v], &chi, n))
                .collect();
            if !cell_keys.iter().any(|(k, s)| *k == c.kind && *s == img) {
                return Err(Error::NotAutomorphism(format!(
                    "{} cell #{} has no image cell",
                    c.kind.name(),
                    i + 1
                )));
            }
        }
        Ok(())
    }
}

/// A class assigning a Laurent polynomial to every vertex.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PiecewiseClass<C = BigInt> {
    pub values: Vec<LaurentPoly<C>>,
}

impl<C: Coeff> PiecewiseClass<C> {
    pub fn new(values: Vec<LaurentPoly<C>>) -> Self {
        Self { values }
    }

    pub fn constant(g: &GkmGraph, c: C) -> Self {
        Self { values: vec![LaurentPoly::constant(g.rank, c); g.num_vertices()] }
    }

    pub fn one(g: &GkmGraph) -> Self {
        Self::constant(g, C::one())
    }

    pub fn zero(g: &GkmGraph) -> Self {
        Self::constant(g, C::zero())
    }

    pub fn is_zero(&self) -> bool {
        self.values.iter().all(LaurentPoly::is_zero)
    }

    fn check(&self, g: &GkmGraph) -> Result<()> {
        if self.values.len() != g.num_vertices() {
            return Err(Error::VertexMismatch { graph: g.num_vertices(), class: self.values.len() });
        }
        for p in &self.values {
            if p.rank() != g.rank {
                return Err(Error::LatticeMismatch { expected: g.rank, found: p.rank() });
            }
        }
        Ok(())
    }

    pub fn add(&self, g: &GkmGraph, other: &Self) -> Result<Self> {
        self.check(g)?;
        other.check(g)?;
        Ok(Self { values: self.values.iter().zip(&other.values).map(|(a, b)| a + b).collect() })
    }

    pub fn sub(&self, g: &GkmGraph, other: &Self) -> Result<Self> {
        self.check(g)?;
        other.check(g)?;
        Ok(Self { values: self.values.iter().zip(&other.values).map(|(a, b)| a - b).collect() })
    }

    pub fn mul(&self, g: &GkmGraph, other: &Self) -> Result<Self> {
        self.check(g)?;
        other.check(g)?;
        Ok(Self { values: self.values.iter().zip(&other.values).map(|(a, b)| a * b).collect() })
    }

    pub fn scale(&self, c: &C) -> Self {
        Self { values: self.values.iter().map(|p| p.scale(c)).collect() }
    }

    /// `(act f)(perm[x]) = A f(x)`, after validating the automorphism.
    pub fn act(&self, g: &GkmGraph, a: &Automorphism) -> Result<Self> {
        self.check(g)?;
        g.validate_automorphism(a)?;
        Ok(self.act_unchecked(a))
    }

    pub(crate) fn act_unchecked(&self, a: &Automorphism) -> Self {
        let mut values = self.values.clone();
        for (x, f) in self.values.iter().enumerate() {
            values[a.perm[x]] = f.apply_lattice_map(&a.mat).expect("square lattice map");
        }
        Self { values }
    }

    /// Membership verdict; constraints are checked in parallel and the first
    /// failing one (in constraint order) is reported.
    pub fn is_member(&self, g: &GkmGraph) -> Result<Verdict<C>> {
        self.check(g)?;
        let constraints = g.constraints();
        let failures: Vec<Option<LaurentPoly<C>>> = constraints
            .par_iter()
            .map(|c| {
                let d = &self.values[c.u] - &self.values[c.v];
                let r = d.reduce_mod(&c.chi, c.n).expect("normalized constraint");
                (!r.is_zero()).then_some(r)
            })
            .collect();
        for (c, f) in constraints.iter().zip(failures) {
            if let Some(remainder) = f {
                return Ok(Verdict {
                    member: false,
                    failure: Some(Failure { constraint: c.clone(), description: g.describe(c), remainder }),
                });
            }
        }
        Ok(Verdict { member: true, failure: None })
    }

    pub fn to_json(&self) -> Value {
        json!({ "values": self.values.iter().map(LaurentPoly::to_json).collect::<Vec<_>>() })
    }

    pub fn from_json(v: &Value, rank: usize) -> Result<Self> {
        let vals = v
            .get("values")
            .and_then(Value::as_array)
            .ok_or_else(|| Error::InvalidGraph("class JSON needs a \"values\" array".into()))?;
        Ok(Self { values: vals.iter().map(|p| LaurentPoly::from_json(p, rank)).collect::<Result<_>>()? })
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Failure<C> {
    pub constraint: Constraint,
    pub description: String,
    /// Nonzero canonical remainder of the difference modulo the ideal.
    pub remainder: LaurentPoly<C>,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Verdict<C> {
    pub member: bool,
    pub failure: Option<Failure<C>>,
}

/// A finite set of exponent vectors in which window classes take values.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Window {
    rank: usize,
    exps: Vec<Vec<i64>>,
    index: HashMap<Vec<i64>, usize>,
}

impl Window {
    pub fn from_exps(rank: usize, mut exps: Vec<Vec<i64>>) -> Self {
        exps.sort();
        exps.dedup();
        let index = exps.iter().enumerate().map(|(i, e)| (e.clone(), i)).collect();
        Self { rank, exps, index }
    }

    /// The box `[-b, b]^rank`.
    pub fn cube(rank: usize, b: i64) -> Self {
        let mut exps = vec![vec![]];
        for _ in 0..rank {
            exps = exps
                .into_iter()
                .flat_map(|e: Vec<i64>| {
                    (-b..=b).map(move |x| {
                        let mut e = e.clone();
                        e.push(x);
                        e
                    })
                })
                .collect();
        }
        Self::from_exps(rank, exps)
    }

    /// The box closed under the given lattice maps.
    pub fn closed_cube(rank: usize, b: i64, mats: &[IntMatrix]) -> Self {
        let start = Self::cube(rank, b);
        let mut seen: BTreeSet<Vec<i64>> = start.exps.iter().cloned().collect();
        let mut todo: Vec<Vec<i64>> = start.exps;
        while let Some(e) = todo.pop() {
            for m in mats {
                let img = linalg::mat_vec(m, &e);
                if seen.insert(img.clone()) {
                    todo.push(img);
                }
            }
        }
        Self::from_exps(rank, seen.into_iter().collect())
    }

    pub fn rank(&self) -> usize {
        self.rank
    }

    pub fn len(&self) -> usize {
        self.exps.len()
    }

    pub fn is_empty(&self) -> bool {
        self.exps.is_empty()
    }

    pub fn exps(&self) -> &[Vec<i64>] {
        &self.exps
    }

    pub fn position(&self, e: &[i64]) -> Option<usize> {
        self.index.get(e).copied()
    }

    pub fn is_stable(&self, mats: &[IntMatrix]) -> bool {
        mats.iter().all(|m| self.exps.iter().all(|e| self.index.contains_key(&linalg::mat_vec(m, e))))
    }
}

fn find(parent: &mut [usize], mut x: usize) -> usize {
    while parent[x] != x {
        parent[x] = parent[parent[x]];
        x = parent[x];
    }
    x
}

/// The lattice of (invariant) member classes supported in a window.
#[derive(Clone, Debug)]
pub struct WindowSolution {
    pub window: Window,
    pub vertices: usize,
    /// Dimension of the solution lattice.
    pub rank: usize,
    /// Saturated Z-basis.
    pub basis: Vec<PiecewiseClass<BigInt>>,
}

impl WindowSolution {
    /// Coordinates of a class over (vertex, window monomial), or `None` if it
    /// has support outside the window.
    pub fn flatten(&self, f: &PiecewiseClass<BigInt>) -> Option<Vec<BigInt>> {
        let w = self.window.len();
        let mut out = vec![BigInt::from(0); self.vertices * w];
        for (x, p) in f.values.iter().enumerate() {
            for (e, c) in p.terms() {
                out[x * w + self.window.position(e)?] = c.clone();
            }
        }
        Some(out)
    }

    fn hnf(&self) -> Vec<Vec<BigInt>> {
        let rows: Vec<Vec<BigInt>> = self.basis.iter().map(|f| self.flatten(f).unwrap()).collect();
        linalg::row_hnf(&rows, self.vertices * self.window.len())
    }

    /// Whether `f` is in the Z-span of the basis.
    pub fn contains(&self, f: &PiecewiseClass<BigInt>) -> bool {
        match self.flatten(f) {
            Some(v) => linalg::lattice_contains(&self.hnf(), &v),
            None => false,
        }
    }

    /// Whether the Z-span of `classes` equals the solution lattice.
    pub fn span_equals(&self, classes: &[PiecewiseClass<BigInt>]) -> bool {
        let mut rows = Vec::with_capacity(classes.len());
        for f in classes {
            match self.flatten(f) {
                Some(v) => rows.push(v),
                None => return false,
            }
        }
        let width = self.vertices * self.window.len();
        let theirs = linalg::row_hnf(&rows, width);
        let ours = self.hnf();
        theirs.len() == ours.len()
            && ours.iter().all(|r| linalg::lattice_contains(&theirs, r))
            && theirs.iter().all(|r| linalg::lattice_contains(&ours, r))
    }
}

/// Sparse linear system over the orbits of `(vertex, monomial)` pairs.
struct WindowSystem {
    orbit_of: Vec<usize>,
    orbits: usize,
    rows: Vec<Vec<(usize, i64)>>,
}

impl WindowSystem {
    fn build(g: &GkmGraph, group: &[Automorphism], window: &Window) -> Self {
        let w = window.len();
        let total = g.num_vertices() * w;
        let mut parent: Vec<usize> = (0..total).collect();
        for a in group {
            for x in 0..g.num_vertices() {
                for (i, e) in window.exps.iter().enumerate() {
                    let j = window.index[&linalg::mat_vec(&a.mat, e)];
                    let (p, q) = (find(&mut parent, x * w + i), find(&mut parent, a.perm[x] * w + j));
                    if p != q {
                        parent[p.max(q)] = p.min(q);
                    }
                }
            }
        }
        let mut label: HashMap<usize, usize> = HashMap::new();
        let mut orbit_of = vec![0; total];
        for k in 0..total {
            let r = find(&mut parent, k);
            let next = label.len();
            orbit_of[k] = *label.entry(r).or_insert(next);
        }
        let orbits = label.len();
        let mut seen: BTreeSet<Vec<(usize, i64)>> = BTreeSet::new();
        let mut rows = Vec::new();
        for c in g.constraints() {
            let (u, _) = linalg::unimodular_to_e1(&c.chi).expect("primitive constraint");
            let mut classes: BTreeMap<Vec<i64>, BTreeMap<usize, i64>> = BTreeMap::new();
            for (i, e) in window.exps.iter().enumerate() {
                let mut key = linalg::mat_vec(&u, e);
                key[0] = key[0].rem_euclid(c.n);
                let row = classes.entry(key).or_default();
                *row.entry(orbit_of[c.u * w + i]).or_insert(0) += 1;
                *row.entry(orbit_of[c.v * w + i]).or_insert(0) -= 1;
            }
            for row in classes.into_values() {
                let r: Vec<(usize, i64)> = row.into_iter().filter(|(_, v)| *v != 0).collect();
                if !r.is_empty() && seen.insert(r.clone()) {
                    rows.push(r);
                }
            }
        }
        Self { orbit_of, orbits, rows }
    }

    fn class(&self, g: &GkmGraph, window: &Window, coords: &[BigInt]) -> PiecewiseClass<BigInt> {
        let w = window.len();
        let values = (0..g.num_vertices())
            .map(|x| {
                let mut p = LaurentPoly::zero(g.rank);
                for (i, e) in window.exps.iter().enumerate() {
                    p.add_term(e.clone(), coords[self.orbit_of[x * w + i]].clone());
                }
                p
            })
            .collect();
        PiecewiseClass { values }
    }
}

fn check_group(g: &GkmGraph, group: &[Automorphism], window: &Window) -> Result<()> {
    for a in group {
        g.validate_automorphism(a)?;
    }
    let mats: Vec<IntMatrix> = group.iter().map(|a| a.mat.clone()).collect();
    if !window.is_stable(&mats) {
        return Err(Error::WindowNotStable);
    }
    Ok(())
}

/// Saturated basis of the member classes fixed by `group` with values in
/// `window` (which must be stable under the group).
pub fn invariants_in_window(g: &GkmGraph, group: &[Automorphism], window: Window) -> Result<WindowSolution> {
    check_group(g, group, &window)?;
    let sys = WindowSystem::build(g, group, &window);
    let k = SparseKernel::solve(&sys.rows, sys.orbits);
    let basis: Vec<_> = k.basis.iter().map(|v| sys.class(g, &window, v)).collect();
    Ok(WindowSolution { vertices: g.num_vertices(), rank: basis.len(), basis, window })
}

/// Rank of the invariant member lattice in `window`, without a basis.
pub fn invariant_rank_in_window(g: &GkmGraph, group: &[Automorphism], window: &Window) -> Result<usize> {
    check_group(g, group, window)?;
    let sys = WindowSystem::build(g, group, window);
    Ok(sys.orbits - SparseKernel::rank_only(&sys.rows))
}

/// Invariant member classes with exponents in the group closure of
/// `[-b, b]^rank`.
pub fn invariants_window(g: &GkmGraph, group: &[Automorphism], b: i64) -> Result<WindowSolution> {
    let mats: Vec<IntMatrix> = group.iter().map(|a| a.mat.clone()).collect();
    invariants_in_window(g, group, Window::closed_cube(g.rank, b, &mats))
}

pub fn members_window(g: &GkmGraph, b: i64) -> Result<WindowSolution> {
    invariants_window(g, &[], b)
}

/// Vertex orbits of the group generated by the permutations.
pub fn vertex_orbits(n: usize, perms: &[&[usize]]) -> Vec<usize> {
    let mut parent: Vec<usize> = (0..n).collect();
    for p in perms {
        for x in 0..n {
            let (a, b) = (find(&mut parent, x), find(&mut parent, p[x]));
            if a != b {
                parent[a.max(b)] = a.min(b);
            }
        }
    }
    (0..n).map(|x| find(&mut parent, x)).collect()
}

/// Combinatorial quotient by vertex permutations: one vertex per orbit
/// (labelled by the lexicographically smallest member), each congruence moved
/// to the orbits of its endpoints, congruences inside an orbit dropped, and
/// parallel congruences with the same character merged when one modulus
/// divides the other (the larger one is kept).
pub fn orbit_quotient(g: &GkmGraph, perms: &[&[usize]]) -> Result<GkmGraph> {
    for p in perms {
        let s: BTreeSet<usize> = p.iter().copied().collect();
        if p.len() != g.num_vertices() || s.len() != p.len() || s.iter().any(|&x| x >= p.len()) {
            return Err(Error::NotAutomorphism("vertex map is not a permutation".into()));
        }
    }
    let root = vertex_orbits(g.num_vertices(), perms);
    let mut members: BTreeMap<usize, Vec<usize>> = BTreeMap::new();
    for (x, r) in root.iter().enumerate() {
        members.entry(*r).or_default().push(x);
    }
    // order quotient vertices by their smallest original index
    let reps: Vec<usize> = members
        .values()
        .map(|m| *m.iter().min_by_key(|&&x| &g.vertices[x]).unwrap())
        .collect();
    let qindex: BTreeMap<usize, usize> = members.keys().enumerate().map(|(i, r)| (*r, i)).collect();
    let mut q = GkmGraph::new(g.rank, reps.iter().map(|&x| g.vertices[x].clone()).collect())?;
    let mut merged: BTreeMap<(usize, usize, Vec<i64>), Vec<i64>> = BTreeMap::new();
    for c in g.constraints() {
        let (a, b) = (qindex[&root[c.u]], qindex[&root[c.v]]);
        if a == b {
            continue;
        }
        merged.entry((a.min(b), a.max(b), c.chi.clone())).or_default().push(c.n);
    }
    for ((a, b, chi), mut ns) in merged {
        ns.sort_unstable_by(|x, y| y.cmp(x));
        ns.dedup();
        let mut kept: Vec<i64> = Vec::new();
        for n in ns {
            if !kept.iter().any(|m| m % n == 0) {
                kept.push(n);
            }
        }
        kept.sort_unstable();
        for n in kept {
            q.add_edge(a, b, &chi, n)?;
        }
    }
    Ok(q)
}

/// Quotient presentation with a consistency check: the invariant member
/// lattice of `g` and the member lattice of the quotient must have the same
/// rank on the group-closed window of size `b`.
pub fn quotient_presentation(g: &GkmGraph, group: &[Automorphism], b: i64) -> Result<GkmGraph> {
    let perms: Vec<&[usize]> = group.iter().map(|a| a.perm.as_slice()).collect();
    let mats: Vec<IntMatrix> = group.iter().map(|a| a.mat.clone()).collect();
    let window = Window::closed_cube(g.rank, b, &mats);
    let invariant = invariant_rank_in_window(g, group, &window)?;
    let q = orbit_quotient(g, &perms)?;
    let quotient = invariant_rank_in_window(&q, &[], &window)?;
    if invariant != quotient {
        return Err(Error::QuotientInconsistent { invariant, quotient });
    }
    Ok(q)
}

fn vertex_ref(g: &GkmGraph, v: &Value) -> Result<usize> {
    match v {
        Value::String(s) => g
            .vertex_index(s)
            .ok_or_else(|| Error::InvalidGraph(format!("unknown vertex {s}"))),
        Value::Number(n) => match n.as_u64() {
            Some(i) if i >= 1 && (i as usize) <= g.num_vertices() => Ok(i as usize - 1),
            _ => Err(Error::InvalidGraph(format!("vertex index {n} out of range (1-based)"))),
        },
        _ => Err(Error::InvalidGraph("vertex must be a label or a 1-based index".into())),
    }
}

fn field<'a>(v: &'a Value, name: &str) -> Result<&'a Value> {
    v.get(name).ok_or_else(|| Error::InvalidGraph(format!("missing field \"{name}\"")))
}

impl GkmGraph {
    pub fn to_json(&self) -> Value {
        let lab = |x: usize| Value::String(self.vertices[x].clone());
        let edges: Vec<Value> = self
            .edges
            .iter()
            .map(|e| json!({"u": lab(e.u), "v": lab(e.v), "chi": e.chi, "n": e.n}))
            .collect();
        let cells: Vec<Value> = self
            .cells
            .iter()
            .map(|c| {
                let mut o = json!({
                    "kind": c.kind.name(),
                    "verts": c.verts.iter().map(|&x| lab(x)).collect::<Vec<_>>(),
                    "chi": c.chi,
                });
                if let CellKind::Fn(n) = c.kind {
                    o["n"] = json!(n);
                }
                o
            })
            .collect();
        let autos: Vec<Value> = self
            .autos
            .iter()
            .map(|a| json!({"perm": a.perm.iter().map(|&x| lab(x)).collect::<Vec<_>>(), "mat": a.mat}))
            .collect();
        json!({"rank": self.rank, "vertices": self.vertices, "edges": edges, "cells": cells, "autos": autos})
    }

    pub fn from_json(v: &Value) -> Result<Self> {
        let rank: usize = serde_json::from_value(field(v, "rank")?.clone())?;
        let vertices: Vec<String> = serde_json::from_value(field(v, "vertices")?.clone())?;
        let mut g = GkmGraph::new(rank, vertices)?;
        let empty = Vec::new();
        for e in v.get("edges").and_then(Value::as_array).unwrap_or(&empty) {
            let u = vertex_ref(&g, field(e, "u")?)?;
            let w = vertex_ref(&g, field(e, "v")?)?;
            let chi: Vec<i64> = serde_json::from_value(field(e, "chi")?.clone())?;
            let n: i64 = serde_json::from_value(field(e, "n")?.clone())?;
            g.add_edge(u, w, &chi, n)?;
        }
        for c in v.get("cells").and_then(Value::as_array).unwrap_or(&empty) {
            let kind = match field(c, "kind")?.as_str() {
                Some("P2") => CellKind::P2,
                Some("P1xP1") => CellKind::P1xP1,
                Some("Fn") => CellKind::Fn(serde_json::from_value(field(c, "n")?.clone())?),
                _ => return Err(Error::InvalidGraph("cell kind must be P2, P1xP1 or Fn".into())),
            };
            let verts = field(c, "verts")?
                .as_array()
                .ok_or_else(|| Error::InvalidGraph("cell verts must be an array".into()))?
                .iter()
                .map(|x| vertex_ref(&g, x))
                .collect::<Result<Vec<_>>>()?;
            let chi: Vec<i64> = serde_json::from_value(field(c, "chi")?.clone())?;
            g.add_cell(kind, verts, &chi)?;
        }
        for a in v.get("autos").and_then(Value::as_array).unwrap_or(&empty) {
            let perm = field(a, "perm")?
                .as_array()
                .ok_or_else(|| Error::InvalidGraph("perm must be an array".into()))?
                .iter()
                .map(|x| vertex_ref(&g, x))
                .collect::<Result<Vec<_>>>()?;
            let mat: IntMatrix = serde_json::from_value(field(a, "mat")?.clone())?;
            g.add_automorphism(Automorphism { perm, mat })?;
        }
        Ok(g)
    }

    /// Graphviz rendering; edge labels read `chi^n`.
    pub fn to_dot(&self) -> String {
        let mut s = String::from("graph gkm {\n");
        for v in &self.vertices {
            let _ = writeln!(s, "  \"{v}\";");
        }
        for e in &self.edges {
            let _ = writeln!(
                s,
                "  \"{}\" -- \"{}\" [label=\"{:?}^{}\"];",
                self.vertices[e.u], self.vertices[e.v], e.chi, e.n
            );
        }
        for (i, c) in self.cells.iter().enumerate() {
            let names: Vec<&str> = c.verts.iter().map(|&x| self.vertices[x].as_str()).collect();
            let _ = writeln!(s, "  // cell {} {} {:?} chi={:?}", i + 1, c.kind.name(), names, c.chi);
        }
        s.push_str("}\n");
        s
    }
}

/// Seeded random integer combinations of a window basis of member classes.
pub fn random_members(g: &GkmGraph, b: i64, count: usize, seed: u64) -> Result<Vec<PiecewiseClass>> {
    use rand::{Rng, SeedableRng};
    let sol = members_window(g, b)?;
    let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(seed);
    let mut out = Vec::with_capacity(count);
    for _ in 0..count {
        let mut f = PiecewiseClass::zero(g);
        for v in &sol.basis {
            let c: i64 = rng.gen_range(-3..=3);
            if c != 0 {
                f = f.add(g, &v.scale(&BigInt::from(c)))?;
            }
        }
        out.push(f);
    }
    Ok(out)
}
