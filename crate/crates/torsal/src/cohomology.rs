//! Cohomology of a nerve in the coordinates of its homology basis.
//!
//! A class in degree `k` is the vector of its values on the chosen integral
//! cycles; the chosen cocycles form the dual basis. Coordinates are rational
//! so that dual bases and averaged classes can be written down directly.

use num_bigint::BigInt;
use num_traits::{One, ToPrimitive, Zero};

use crate::category::{AcyclicCategory, Nerve};
use crate::error::{Error, Result};
use crate::homology::{cup, pullback, ChainComplex, Homology, HomologyGroup};
use crate::lattice::{denominator_lcm, Q};

#[derive(Clone, Debug)]
pub struct Space {
    pub cat: AcyclicCategory,
    pub nerve: Nerve,
    pub complex: ChainComplex,
    pub homology: Homology,
}

fn to_i64(x: &BigInt) -> Result<i64> {
    x.to_i64().ok_or(Error::Overflow)
}

impl Space {
    /// Cohomology through degree `top`; the nerve is built one degree higher.
    pub fn new(cat: AcyclicCategory, top: usize) -> Result<Space> {
        let nerve = Nerve::new(&cat, top + 1);
        let complex = ChainComplex::from_nerve(&cat, &nerve);
        let homology = complex.homology()?;
        Ok(Space { cat, nerve, complex, homology })
    }

    fn group(&self, k: usize) -> Option<&HomologyGroup> {
        self.homology.groups.get(k)
    }

    pub fn betti(&self, k: usize) -> usize {
        self.group(k).map_or(0, |g| g.betti)
    }

    pub fn bettis(&self, top: usize) -> Vec<usize> {
        (0..=top).map(|k| self.betti(k)).collect()
    }

    /// Number of `k`-simplices.
    pub fn cells(&self, k: usize) -> usize {
        self.nerve.count(k)
    }

    pub fn is_torsion_free(&self) -> bool {
        self.homology.is_torsion_free()
    }

    pub fn cocycle_class(&self, k: usize, c: &[i64]) -> Result<Vec<Q>> {
        match self.group(k) {
            Some(g) => Ok(g.cocycle_class(c)?.into_iter().map(Q::from_integer_i64).collect()),
            None => Ok(Vec::new()),
        }
    }

    pub fn cycle_class(&self, k: usize, z: &[i64]) -> Result<Vec<Q>> {
        match self.group(k) {
            Some(g) => Ok(g.cycle_class(z)?.into_iter().map(Q::from_integer_i64).collect()),
            None => Ok(Vec::new()),
        }
    }

    /// `(c, n)` with `c` an integral cocycle representing `n · x`.
    pub fn representative(&self, k: usize, x: &[Q]) -> Result<(Vec<i64>, i64)> {
        let n = denominator_lcm(x);
        let mut c = vec![0i64; self.cells(k)];
        let Some(g) = self.group(k) else { return Ok((c, 1)) };
        for (xi, ci) in x.iter().zip(&g.cocycles) {
            let f = to_i64(&(xi * Q::from_integer(n.clone())).to_integer())?;
            if f != 0 {
                crate::homology::scale_add(&mut c, f, ci)?;
            }
        }
        Ok((c, to_i64(&n)?))
    }

    /// The unit of the cohomology ring.
    pub fn unit(&self) -> Result<Vec<Q>> {
        self.cocycle_class(0, &vec![1; self.cells(0)])
    }

    /// `x ⌣ y` for `x` of degree `p` and `y` of degree `q`.
    pub fn cup(&self, p: usize, x: &[Q], q: usize, y: &[Q]) -> Result<Vec<Q>> {
        if self.betti(p + q) == 0 {
            return Ok(vec![Q::zero(); self.betti(p + q)]);
        }
        let (a, na) = self.representative(p, x)?;
        let (b, nb) = self.representative(q, y)?;
        let c = cup(&self.cat, &self.nerve, &a, p, &b, q)?;
        let den = Q::from_integer(BigInt::from(na) * BigInt::from(nb));
        Ok(self.cocycle_class(p + q, &c)?.into_iter().map(|v| v / &den).collect())
    }

    /// Product of degree-one classes, left to right; the unit when empty.
    pub fn product(&self, factors: &[Vec<Q>]) -> Result<Vec<Q>> {
        let mut acc = self.unit()?;
        for (k, f) in factors.iter().enumerate() {
            acc = self.cup(k, &acc, 1, f)?;
        }
        Ok(acc)
    }

    /// Restriction of `x ∈ H^k(self)` along a simplex map `sub → self`.
    pub fn restrict(&self, sub: &Space, map: &[Option<usize>], k: usize, x: &[Q]) -> Result<Vec<Q>> {
        let (c, n) = self.representative(k, x)?;
        let n = Q::from_integer(n.into());
        Ok(sub.cocycle_class(k, &pullback(map, &c))?.into_iter().map(|v| v / &n).collect())
    }

    /// Matrix of the restriction in degree `k`, one column per basis class.
    pub fn restriction_matrix(&self, sub: &Space, map: &[Option<usize>], k: usize) -> Result<Vec<Vec<Q>>> {
        let g = match self.group(k) {
            Some(g) => g,
            None => return Ok(vec![Vec::new(); sub.betti(k)]),
        };
        let cols: Vec<Vec<Q>> = g
            .cocycles
            .iter()
            .map(|c| sub.cocycle_class(k, &pullback(map, c)))
            .collect::<Result<_>>()?;
        Ok((0..sub.betti(k)).map(|r| cols.iter().map(|c| c[r].clone()).collect()).collect())
    }

    /// The class of `f_*(z)` for a cycle `z` of `sub`, with `map : sub → self`.
    pub fn push_cycle(&self, map: &[Option<usize>], k: usize, z: &[i64]) -> Result<Vec<Q>> {
        let pushed = crate::homology::pushforward(map, self.cells(k), z)?;
        self.cycle_class(k, &pushed)
    }

    /// Value of a class on a cycle.
    pub fn pair_class(&self, k: usize, x: &[Q], z: &[i64]) -> Result<Q> {
        let y = self.cycle_class(k, z)?;
        Ok(x.iter().zip(&y).fold(Q::zero(), |acc, (a, b)| acc + a * b))
    }
}

trait FromI64 {
    fn from_integer_i64(v: i64) -> Self;
}

impl FromI64 for Q {
    fn from_integer_i64(v: i64) -> Q {
        Q::from_integer(BigInt::from(v))
    }
}

/// `true` when every entry is an integer.
pub fn is_integral(v: &[Q]) -> bool {
    v.iter().all(|x| x.is_integer())
}

pub fn is_zero_q(v: &[Q]) -> bool {
    v.iter().all(Zero::is_zero)
}

pub fn unit_vector(n: usize, i: usize) -> Vec<Q> {
    (0..n).map(|j| if i == j { Q::one() } else { Q::zero() }).collect()
}

#[cfg(test)]
mod tests {
    use std::collections::HashMap;

    use super::*;
    use crate::lattice::qi;

    /// Face poset of the boundary of a tetrahedron: its nerve is a subdivided 2-sphere.
    fn sphere() -> AcyclicCategory {
        let faces: Vec<Vec<usize>> = (1u32..15)
            .map(|m| (0..4).filter(|i| m & (1 << i) != 0).collect::<Vec<usize>>())
            .collect();
        let less = |a: &Vec<usize>, b: &Vec<usize>| a.len() < b.len() && a.iter().all(|x| b.contains(x));
        let mut mors = Vec::new();
        let mut index = HashMap::new();
        for i in 0..faces.len() {
            for j in 0..faces.len() {
                if less(&faces[i], &faces[j]) {
                    index.insert((i, j), mors.len());
                    mors.push((i, j));
                }
            }
        }
        let mut compose = HashMap::new();
        for (f, &(a, b)) in mors.iter().enumerate() {
            for (g, &(b2, c)) in mors.iter().enumerate() {
                if b == b2 {
                    compose.insert((f, g), index[&(a, c)]);
                }
            }
        }
        AcyclicCategory::new(faces.len(), mors, compose).unwrap()
    }

    #[test]
    fn sphere_has_a_class_in_degree_two() {
        let s = Space::new(sphere(), 2).unwrap();
        assert_eq!(s.bettis(2), vec![1, 0, 1]);
        assert_eq!(s.unit().unwrap(), vec![qi(1)]);
    }

    #[test]
    fn representatives_round_trip() {
        let s = Space::new(sphere(), 2).unwrap();
        let x = vec![Q::new(3.into(), 2.into())];
        let (c, n) = s.representative(2, &x).unwrap();
        assert_eq!(n, 2);
        let back: Vec<Q> = s.cocycle_class(2, &c).unwrap().into_iter().map(|v| v / qi(n)).collect();
        assert_eq!(back, x);
    }

    #[test]
    fn restriction_to_itself_is_the_identity() {
        let s = Space::new(sphere(), 2).unwrap();
        for k in 0..=2 {
            let id: Vec<Option<usize>> = (0..s.cells(k)).map(Some).collect();
            let m = s.restriction_matrix(&s, &id, k).unwrap();
            for (i, row) in m.iter().enumerate() {
                assert_eq!(row, &unit_vector(s.betti(k), i));
            }
        }
    }
}
