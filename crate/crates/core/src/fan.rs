//! Simplicial rational fans, smoothness and completeness tests, and the
//! catalog of toric surfaces used throughout the crate.

use std::collections::{BTreeMap, BTreeSet};

use num_bigint::BigInt;
use num_traits::One;
use serde::{Deserialize, Serialize};

use crate::charlat::is_primitive;
use crate::error::{Error, Result};
use crate::linalg::{self, IntMatrix};

/// A simplicial fan given by its maximal cones. Ray indices are 0-based in
/// memory and 1-based in JSON.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Fan {
    rank: usize,
    rays: Vec<Vec<i64>>,
    max_cones: Vec<Vec<usize>>,
}

#[derive(Serialize, Deserialize)]
struct FanJson {
    rank: usize,
    rays: Vec<Vec<i64>>,
    max_cones: Vec<Vec<usize>>,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Surface {
    P1,
    P2,
    P1xP1,
    Fn(u32),
}

impl Surface {
    pub fn parse(name: &str, n: Option<u32>) -> Result<Self> {
        match name {
            "P1" => Ok(Surface::P1),
            "P2" => Ok(Surface::P2),
            "P1xP1" => Ok(Surface::P1xP1),
            "Fn" => match n {
                Some(n) if n >= 1 => Ok(Surface::Fn(n)),
                Some(_) => Err(Error::InvalidFan("Fn requires n >= 1".into())),
                None => Err(Error::InvalidFan("Fn requires a value of n".into())),
            },
            other => Err(Error::InvalidFan(format!("unknown surface {other}"))),
        }
    }

    pub fn name(&self) -> String {
        match self {
            Surface::P1 => "P1".into(),
            Surface::P2 => "P2".into(),
            Surface::P1xP1 => "P1xP1".into(),
            Surface::Fn(n) => format!("F{n}"),
        }
    }
}

fn cross(u: &[i64], v: &[i64]) -> i64 {
    u[0] * v[1] - u[1] * v[0]
}

/// Whether `p` is a nonnegative combination of the (linearly independent,
/// full-dimensional) columns `gens`, solved by Cramer's rule.
fn in_simplicial_cone(gens: &[Vec<i64>], p: &[i64]) -> bool {
    let m: IntMatrix = linalg::transpose(&gens.to_vec());
    let d = linalg::det(&m);
    (0..gens.len()).all(|i| {
        let mut mi = m.clone();
        for (r, row) in mi.iter_mut().enumerate() {
            row[i] = p[r];
        }
        let di = linalg::det(&mi);
        di == 0 || (di > 0) == (d > 0)
    })
}

impl Fan {
    pub fn new(rank: usize, rays: Vec<Vec<i64>>, max_cones: Vec<Vec<usize>>) -> Result<Self> {
        if rank == 0 {
            return Err(Error::InvalidFan("rank must be positive".into()));
        }
        for (i, r) in rays.iter().enumerate() {
            if r.len() != rank {
                return Err(Error::InvalidFan(format!("ray {} has length {}", i + 1, r.len())));
            }
            if !is_primitive(r) {
                return Err(Error::InvalidFan(format!("ray {} is not primitive", i + 1)));
            }
        }
        let distinct: BTreeSet<&Vec<i64>> = rays.iter().collect();
        if distinct.len() != rays.len() {
            return Err(Error::InvalidFan("rays are not pairwise distinct".into()));
        }
        let mut cones = Vec::with_capacity(max_cones.len());
        for c in max_cones {
            let set: BTreeSet<usize> = c.iter().copied().collect();
            if set.len() != c.len() || set.iter().any(|&i| i >= rays.len()) {
                return Err(Error::InvalidFan(format!("bad ray indices in cone {c:?}")));
            }
            let m: IntMatrix = set.iter().map(|&i| rays[i].clone()).collect();
            if linalg::rank_small(&m) != set.len() {
                return Err(Error::InvalidFan(format!("rays of cone {c:?} are dependent")));
            }
            cones.push(set.into_iter().collect::<Vec<_>>());
        }
        let fan = Fan { rank, rays, max_cones: cones };
        fan.check_intersections()?;
        Ok(fan)
    }

    /// Two maximal cones must not contain each other's extra rays; for
    /// simplicial fans this catches overlapping cones.
    fn check_intersections(&self) -> Result<()> {
        for s in &self.max_cones {
            if s.len() != self.rank {
                continue;
            }
            let gens: Vec<Vec<i64>> = s.iter().map(|&i| self.rays[i].clone()).collect();
            for t in &self.max_cones {
                for &r in t {
                    if !s.contains(&r) && in_simplicial_cone(&gens, &self.rays[r]) {
                        return Err(Error::InvalidFan(format!(
                            "ray {} lies inside cone {:?}",
                            r + 1,
                            s.iter().map(|i| i + 1).collect::<Vec<_>>()
                        )));
                    }
                }
            }
        }
        Ok(())
    }

    pub fn rank(&self) -> usize {
        self.rank
    }

    pub fn rays(&self) -> &[Vec<i64>] {
        &self.rays
    }

    pub fn max_cones(&self) -> &[Vec<usize>] {
        &self.max_cones
    }

    /// Label of a maximal cone, e.g. `s12` for rays 1 and 2.
    pub fn cone_label(&self, cone: &[usize]) -> String {
        let mut s = String::from("s");
        for i in cone {
            s.push_str(&(i + 1).to_string());
        }
        s
    }

    pub fn is_face(&self, cone: &[usize]) -> bool {
        let set: BTreeSet<usize> = cone.iter().copied().collect();
        self.max_cones.iter().any(|m| set.iter().all(|i| m.contains(i)))
    }

    pub fn is_smooth(&self) -> bool {
        self.max_cones.iter().all(|c| {
            let m: Vec<Vec<BigInt>> = c
                .iter()
                .map(|&i| self.rays[i].iter().map(|&x| BigInt::from(x)).collect())
                .collect();
            linalg::elementary_divisors(&m, self.rank).iter().all(One::is_one)
        })
    }

    pub fn is_complete(&self) -> bool {
        if self.max_cones.iter().any(|c| c.len() != self.rank) {
            return false;
        }
        if self.rank == 2 {
            return self.angular_coverage();
        }
        self.facets().values().all(|owners| owners.len() == 2)
    }

    fn angular_coverage(&self) -> bool {
        let half = |v: &[i64]| v[1] < 0 || (v[1] == 0 && v[0] < 0);
        let mut order: Vec<usize> = (0..self.rays.len()).collect();
        order.sort_by(|&a, &b| {
            let (u, v) = (&self.rays[a], &self.rays[b]);
            half(u).cmp(&half(v)).then_with(|| 0.cmp(&cross(u, v)))
        });
        if order.len() < 3 || self.max_cones.len() != order.len() {
            return false;
        }
        let cones: BTreeSet<Vec<usize>> = self.max_cones.iter().cloned().collect();
        (0..order.len()).all(|k| {
            let (a, b) = (order[k], order[(k + 1) % order.len()]);
            let key = if a < b { vec![a, b] } else { vec![b, a] };
            cones.contains(&key) && cross(&self.rays[a], &self.rays[b]) > 0
        })
    }

    /// Codimension-one faces of maximal cones with the cones containing them.
    pub fn facets(&self) -> BTreeMap<Vec<usize>, Vec<usize>> {
        let mut out: BTreeMap<Vec<usize>, Vec<usize>> = BTreeMap::new();
        for (k, c) in self.max_cones.iter().enumerate() {
            for skip in 0..c.len() {
                let f: Vec<usize> = c.iter().enumerate().filter(|(i, _)| *i != skip).map(|(_, &r)| r).collect();
                out.entry(f).or_default().push(k);
            }
        }
        out
    }

    /// Pairs of maximal cones meeting in a common facet, with that facet.
    pub fn walls(&self) -> Vec<(usize, usize, Vec<usize>)> {
        self.facets()
            .into_iter()
            .filter(|(_, o)| o.len() == 2)
            .map(|(f, o)| (o[0], o[1], f))
            .collect()
    }

    /// Integer basis of `M(sigma)`, the characters vanishing on `sigma`.
    pub fn orbit_character_lattice(&self, cone: &[usize]) -> Result<Vec<Vec<i64>>> {
        if !self.is_face(cone) {
            return Err(Error::ConeNotInFan(cone.iter().map(|i| i + 1).collect()));
        }
        let m: IntMatrix = cone.iter().map(|&i| self.rays[i].clone()).collect();
        if m.is_empty() {
            return Ok(linalg::identity(self.rank));
        }
        Ok(linalg::integer_kernel_small(&m, self.rank)
            .into_iter()
            .map(|v| crate::charlat::canonical_sign(&v))
            .collect())
    }

    pub fn surface_catalog(s: Surface) -> Fan {
        let (rank, rays, cones): (usize, Vec<Vec<i64>>, Vec<Vec<usize>>) = match s {
            Surface::P1 => (1, vec![vec![1], vec![-1]], vec![vec![0], vec![1]]),
            Surface::P2 => (
                2,
                vec![vec![1, 0], vec![0, 1], vec![-1, -1]],
                vec![vec![0, 1], vec![1, 2], vec![0, 2]],
            ),
            Surface::P1xP1 => (
                2,
                vec![vec![1, 0], vec![0, 1], vec![-1, 0], vec![0, -1]],
                vec![vec![0, 1], vec![1, 2], vec![2, 3], vec![0, 3]],
            ),
            Surface::Fn(n) => (
                2,
                vec![vec![1, 0], vec![0, 1], vec![-1, n as i64], vec![0, -1]],
                vec![vec![0, 1], vec![1, 2], vec![2, 3], vec![0, 3]],
            ),
        };
        Fan::new(rank, rays, cones).expect("catalog fan")
    }

    /// The fan of projective space of dimension `r`.
    pub fn projective_space(r: usize) -> Fan {
        let mut rays = linalg::identity(r);
        rays.push(vec![-1; r]);
        let cones = (0..=r).map(|skip| (0..=r).filter(|&i| i != skip).collect()).collect();
        Fan::new(r, rays, cones).expect("projective space fan")
    }

    pub fn to_json(&self) -> serde_json::Value {
        serde_json::to_value(FanJson {
            rank: self.rank,
            rays: self.rays.clone(),
            max_cones: self.max_cones.iter().map(|c| c.iter().map(|i| i + 1).collect()).collect(),
        })
        .expect("fan serializes")
    }

    pub fn from_json(v: &serde_json::Value) -> Result<Self> {
        let raw: FanJson = serde_json::from_value(v.clone())?;
        let mut cones = Vec::new();
        for c in raw.max_cones {
            if c.iter().any(|&i| i == 0) {
                return Err(Error::InvalidFan("ray indices are 1-based".into()));
            }
            cones.push(c.iter().map(|i| i - 1).collect());
        }
        Fan::new(raw.rank, raw.rays, cones)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn smoothness_examples() {
        assert!(Fan::surface_catalog(Surface::P2).is_smooth());
        assert!(Fan::surface_catalog(Surface::P1).is_smooth());
        let bad = Fan::new(2, vec![vec![1, 0], vec![1, 2]], vec![vec![0, 1]]).unwrap();
        assert!(!bad.is_smooth());
        assert_eq!(linalg::det(&vec![vec![1, 0], vec![1, 2]]), 2);
    }

    #[test]
    fn completeness_examples() {
        for n in 1..=20 {
            let f = Fan::surface_catalog(Surface::Fn(n));
            assert!(f.is_complete() && f.is_smooth(), "F{n}");
        }
        let p2 = Fan::surface_catalog(Surface::P2);
        let partial = Fan::new(2, p2.rays().to_vec(), p2.max_cones()[..2].to_vec()).unwrap();
        assert!(!partial.is_complete());
        let q = Fan::surface_catalog(Surface::P1xP1);
        assert!(q.is_complete() && q.is_smooth());
        // facet pairing agrees with the angular test in rank two
        assert!(q.facets().values().all(|o| o.len() == 2));
        assert!(Fan::surface_catalog(Surface::P1).is_complete());
        let p3 = Fan::projective_space(3);
        assert!(p3.is_complete() && p3.is_smooth());
        let mut cones = p3.max_cones().to_vec();
        cones.pop();
        assert!(!Fan::new(3, p3.rays().to_vec(), cones).unwrap().is_complete());
    }

    #[test]
    fn catalog_shapes() {
        let p2 = Fan::surface_catalog(Surface::P2);
        assert_eq!((p2.rays().len(), p2.max_cones().len()), (3, 3));
        assert_eq!(Fan::surface_catalog(Surface::Fn(2)).rays()[2], vec![-1, 2]);
        assert!(Surface::parse("Fn", None).is_err());
        assert!(Surface::parse("Fn", Some(0)).is_err());
    }

    #[test]
    fn orbit_lattices() {
        let p2 = Fan::surface_catalog(Surface::P2);
        assert_eq!(p2.orbit_character_lattice(&[]).unwrap(), linalg::identity(2));
        assert!(p2.orbit_character_lattice(&[0, 1]).unwrap().is_empty());
        assert_eq!(p2.orbit_character_lattice(&[0]).unwrap(), vec![vec![0, 1]]);
        assert!(p2.orbit_character_lattice(&[0, 1, 2]).is_err());
        let fans = [Surface::P1, Surface::P2, Surface::P1xP1, Surface::Fn(3)].map(Fan::surface_catalog);
        for f in fans {
            for c in f.max_cones() {
                for k in 0..=c.len() {
                    let sub = &c[..k];
                    assert_eq!(f.orbit_character_lattice(sub).unwrap().len() + k, f.rank());
                }
            }
        }
    }

    #[test]
    fn invalid_fans_are_rejected() {
        assert!(Fan::new(2, vec![vec![2, 0]], vec![vec![0]]).is_err());
        assert!(Fan::new(2, vec![vec![1, 0], vec![1, 0]], vec![]).is_err());
        // overlapping cones
        let r = vec![vec![1, 0], vec![0, 1], vec![1, 1], vec![-1, 0]];
        assert!(Fan::new(2, r, vec![vec![0, 1], vec![2, 3]]).is_err());
        let json = Fan::surface_catalog(Surface::P1xP1).to_json();
        assert_eq!(Fan::from_json(&json).unwrap(), Fan::surface_catalog(Surface::P1xP1));
        assert_eq!(json["max_cones"][0], serde_json::json!([1, 2]));
    }
}
