//! Truncated Chern character, the Riemann-Roch map on `1 - chi^n`, and the
//! transport of K-theoretic congruences to Chow congruences over Q.

use std::collections::BTreeMap;
use std::fmt;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};
use serde_json::{json, Value};

use crate::error::{Error, Result};
use crate::gkm::{CellKind, GkmGraph, PiecewiseClass};
use crate::report::Report;
use crate::IntPoly;

pub const DEFAULT_DEGREE: usize = 4;

/// Polynomial in symbols `x_1..x_r` with rational coefficients, truncated
/// above total degree `n`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct TruncatedSeries {
    rank: usize,
    bound: usize,
    terms: BTreeMap<Vec<u32>, BigRational>,
}

fn degree(e: &[u32]) -> usize {
    e.iter().map(|&x| x as usize).sum()
}

fn rat(n: i64) -> BigRational {
    BigRational::from_integer(BigInt::from(n))
}

impl TruncatedSeries {
    pub fn zero(rank: usize, bound: usize) -> Self {
        Self { rank, bound, terms: BTreeMap::new() }
    }

    pub fn constant(rank: usize, bound: usize, c: BigRational) -> Self {
        let mut s = Self::zero(rank, bound);
        s.add_term(vec![0; rank], c);
        s
    }

    pub fn one(rank: usize, bound: usize) -> Self {
        Self::constant(rank, bound, BigRational::one())
    }

    /// The linear form `sum a_i x_i`.
    pub fn linear(a: &[i64], bound: usize) -> Self {
        let mut s = Self::zero(a.len(), bound);
        for (i, &c) in a.iter().enumerate() {
            let mut e = vec![0; a.len()];
            e[i] = 1;
            s.add_term(e, rat(c));
        }
        s
    }

    pub fn rank(&self) -> usize {
        self.rank
    }

    pub fn bound(&self) -> usize {
        self.bound
    }

    pub fn terms(&self) -> &BTreeMap<Vec<u32>, BigRational> {
        &self.terms
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn coeff(&self, e: &[u32]) -> BigRational {
        self.terms.get(e).cloned().unwrap_or_else(BigRational::zero)
    }

    pub fn add_term(&mut self, e: Vec<u32>, c: BigRational) {
        if degree(&e) > self.bound || c.is_zero() {
            return;
        }
        let slot = self.terms.entry(e.clone()).or_insert_with(BigRational::zero);
        *slot += c;
        if slot.is_zero() {
            self.terms.remove(&e);
        }
    }

    pub fn add(&self, o: &Self) -> Self {
        let mut s = self.clone();
        s.bound = s.bound.min(o.bound);
        s.terms.retain(|e, _| degree(e) <= s.bound);
        for (e, c) in &o.terms {
            s.add_term(e.clone(), c.clone());
        }
        s
    }

    pub fn scale(&self, c: &BigRational) -> Self {
        let mut s = Self::zero(self.rank, self.bound);
        for (e, x) in &self.terms {
            s.add_term(e.clone(), x * c);
        }
        s
    }

    pub fn sub(&self, o: &Self) -> Self {
        self.add(&o.scale(&rat(-1)))
    }

    pub fn mul(&self, o: &Self) -> Self {
        let mut s = Self::zero(self.rank, self.bound.min(o.bound));
        for (a, x) in &self.terms {
            for (b, y) in &o.terms {
                let e: Vec<u32> = a.iter().zip(b).map(|(p, q)| p + q).collect();
                s.add_term(e, x * y);
            }
        }
        s
    }

    pub fn pow(&self, k: u32) -> Self {
        let mut out = Self::one(self.rank, self.bound);
        for _ in 0..k {
            out = out.mul(self);
        }
        out
    }

    /// The homogeneous component of degree `d`.
    pub fn component(&self, d: usize) -> Self {
        let mut s = Self::zero(self.rank, self.bound);
        for (e, c) in &self.terms {
            if degree(e) == d {
                s.add_term(e.clone(), c.clone());
            }
        }
        s
    }

    /// Whether the (polynomial) series is divisible by the linear form `l`:
    /// it must vanish on the hyperplane `l = 0`.
    pub fn divisible_by_linear(&self, l: &[i64]) -> bool {
        let Some(j) = l.iter().position(|&x| x != 0) else { return self.is_zero() };
        // x_j = -(sum_{k != j} l_k x_k) / l_j
        let mut sub = Self::zero(self.rank, self.bound);
        for (k, &c) in l.iter().enumerate() {
            if k != j {
                let mut e = vec![0; self.rank];
                e[k] = 1;
                sub.add_term(e, rat(-c) / rat(l[j]));
            }
        }
        let mut total = Self::zero(self.rank, self.bound);
        for (e, c) in &self.terms {
            let mut rest = e.clone();
            rest[j] = 0;
            let mut t = Self::zero(self.rank, self.bound);
            t.add_term(rest, c.clone());
            total = total.add(&t.mul(&sub.pow(e[j])));
        }
        total.is_zero()
    }

    pub fn to_json(&self) -> Value {
        Value::Object(
            self.terms
                .iter()
                .map(|(e, c)| (format!("{e:?}"), Value::String(c.to_string())))
                .collect(),
        )
    }
}

impl fmt::Display for TruncatedSeries {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return write!(f, "0");
        }
        let name = |i: usize| if self.rank == 1 { "x".to_string() } else { format!("x{}", i + 1) };
        let mut keys: Vec<&Vec<u32>> = self.terms.keys().collect();
        keys.sort_by_key(|e| (degree(e), std::cmp::Reverse((*e).clone())));
        for (k, e) in keys.into_iter().enumerate() {
            let c = &self.terms[e];
            let mono: Vec<String> = e
                .iter()
                .enumerate()
                .filter(|(_, &p)| p > 0)
                .map(|(i, &p)| if p == 1 { name(i) } else { format!("{}^{p}", name(i)) })
                .collect();
            let (neg, a) = (c.is_negative(), c.abs());
            if k == 0 {
                write!(f, "{}", if neg { "-" } else { "" })?;
            } else {
                write!(f, " {} ", if neg { "-" } else { "+" })?;
            }
            match (mono.is_empty(), a.is_one()) {
                (true, _) => write!(f, "{a}")?,
                (false, true) => write!(f, "{}", mono.join("*"))?,
                (false, false) => write!(f, "{a}*{}", mono.join("*"))?,
            }
        }
        Ok(())
    }
}

fn factorial(n: usize) -> BigRational {
    BigRational::from_integer((1..=n as u64).map(BigInt::from).product())
}

/// `exp(l)` truncated at degree `bound`.
fn exp_linear(a: &[i64], bound: usize) -> TruncatedSeries {
    let l = TruncatedSeries::linear(a, bound);
    let mut out = TruncatedSeries::zero(a.len(), bound);
    let mut p = TruncatedSeries::one(a.len(), bound);
    for k in 0..=bound {
        out = out.add(&p.scale(&(BigRational::one() / factorial(k))));
        p = p.mul(&l);
    }
    out
}

/// `tau(1 - chi^n) = sum_{i=1}^N (-1)^{i+1} L^i / (i+1)!` with `L = n chi`.
pub fn tau_one_minus(chi: &[i64], n: i64, bound: usize) -> TruncatedSeries {
    let l: Vec<i64> = chi.iter().map(|x| x * n).collect();
    let lin = TruncatedSeries::linear(&l, bound);
    let mut out = TruncatedSeries::zero(chi.len(), bound);
    let mut p = lin.clone();
    for i in 1..=bound {
        let sign = if i % 2 == 1 { rat(1) } else { rat(-1) };
        out = out.add(&p.scale(&(sign / factorial(i + 1))));
        p = p.mul(&lin);
    }
    out
}

/// Chern character: `chi^a -> exp(sum a_i x_i)`, truncated.
pub fn ch_truncated(f: &IntPoly, bound: usize) -> TruncatedSeries {
    let mut out = TruncatedSeries::zero(f.rank(), bound);
    for (e, c) in f.terms() {
        out = out.add(&exp_linear(e, bound).scale(&BigRational::from_integer(c.clone())));
    }
    out
}

/// A congruence `f_u = f_v mod form` with the integer multiplicity of the
/// K-theoretic exponent kept for reference.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ChowCongruence {
    pub u: usize,
    pub v: usize,
    pub form: Vec<i64>,
    pub multiplicity: i64,
    pub origin: String,
}

#[derive(Clone, Debug)]
pub struct ChowGkmGraph {
    pub vertices: Vec<String>,
    pub congruences: Vec<ChowCongruence>,
}

/// Replace every congruence modulo `1 - chi^n` by one modulo the linear
/// form of `chi` (the leading form of `ch(1 - chi^n)` is `-n chi`; the scalar
/// is a unit over Q).
pub fn k_to_chow(g: &GkmGraph) -> ChowGkmGraph {
    let mut congruences = Vec::new();
    for (i, e) in g.edges().iter().enumerate() {
        congruences.push(ChowCongruence { u: e.u, v: e.v, form: e.chi.clone(), multiplicity: e.n, origin: format!("edge #{}", i + 1) });
    }
    for (i, c) in g.cells().iter().enumerate() {
        let kind = match c.kind {
            CellKind::P2 => "P2",
            CellKind::P1xP1 => "P1xP1",
            CellKind::Fn(_) => "Fn",
        };
        for (u, v, n) in c.clauses() {
            congruences.push(ChowCongruence {
                u,
                v,
                form: c.chi.clone(),
                multiplicity: n,
                origin: format!("{kind} cell #{}", i + 1),
            });
        }
    }
    ChowGkmGraph { vertices: g.vertices().to_vec(), congruences }
}

impl ChowGkmGraph {
    pub fn to_json(&self) -> Value {
        json!({
            "vertices": self.vertices,
            "congruences": self.congruences.iter().map(|c| json!({
                "u": self.vertices[c.u], "v": self.vertices[c.v], "form": c.form,
                "multiplicity": c.multiplicity, "origin": c.origin,
            })).collect::<Vec<_>>(),
        })
    }
}

/// Check that the Chern images of the values of `f` satisfy every Chow
/// congruence degree by degree up to `bound`.
pub fn verify_transport(g: &GkmGraph, f: &PiecewiseClass, bound: usize) -> Result<Report> {
    if f.values.len() != g.num_vertices() {
        return Err(Error::VertexMismatch { graph: g.num_vertices(), class: f.values.len() });
    }
    let mut rep = Report::new(format!("Chern transport up to degree {bound}"));
    let chow = k_to_chow(g);
    let ch: Vec<TruncatedSeries> = f.values.iter().map(|p| ch_truncated(p, bound)).collect();
    let mut failures = Vec::new();
    for c in &chow.congruences {
        let diff = ch[c.u].sub(&ch[c.v]);
        for d in 0..=bound {
            if !diff.component(d).divisible_by_linear(&c.form) {
                failures.push(format!("{} ({}-{}) in degree {d}", c.origin, chow.vertices[c.u], chow.vertices[c.v]));
            }
        }
    }
    rep.push(
        "Chow congruences",
        failures.is_empty(),
        if failures.is_empty() {
            format!("{} congruences, degrees 0..={bound}", chow.congruences.len())
        } else {
            failures.join("; ")
        },
    );
    Ok(rep)
}
