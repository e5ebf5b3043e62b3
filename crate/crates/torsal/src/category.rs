//! Finite acyclic categories and their nerves.

use std::collections::HashMap;

use crate::error::{Error, Result};

/// A finite acyclic category; only non-identity morphisms are stored.
#[derive(Clone, Debug, Default)]
pub struct AcyclicCategory {
    pub n_objects: usize,
    /// `(source, target)` of each non-identity morphism.
    pub morphisms: Vec<(usize, usize)>,
    /// Composite of `(f, g)` meaning "first `f`, then `g`".
    pub compose: HashMap<(usize, usize), usize>,
    /// Outgoing non-identity morphisms per object.
    pub out: Vec<Vec<usize>>,
}

impl AcyclicCategory {
    pub fn new(n_objects: usize, morphisms: Vec<(usize, usize)>, compose: HashMap<(usize, usize), usize>) -> Result<Self> {
        let mut out = vec![Vec::new(); n_objects];
        for (i, &(s, t)) in morphisms.iter().enumerate() {
            if s == t {
                return Err(Error::Check(format!("morphism {i} is an endomorphism; the category is not acyclic")));
            }
            out[s].push(i);
        }
        for (&(f, g), &h) in &compose {
            if morphisms[f].1 != morphisms[g].0 || morphisms[h] != (morphisms[f].0, morphisms[g].1) {
                return Err(Error::Check("composition table has mismatched endpoints".into()));
            }
        }
        let cat = AcyclicCategory { n_objects, morphisms, compose, out };
        cat.check_acyclic()?;
        Ok(cat)
    }

    fn check_acyclic(&self) -> Result<()> {
        let mut indeg = vec![0usize; self.n_objects];
        for &(_, t) in &self.morphisms {
            indeg[t] += 1;
        }
        let mut stack: Vec<usize> = (0..self.n_objects).filter(|&o| indeg[o] == 0).collect();
        let mut seen = 0;
        while let Some(o) = stack.pop() {
            seen += 1;
            for &m in &self.out[o] {
                let t = self.morphisms[m].1;
                indeg[t] -= 1;
                if indeg[t] == 0 {
                    stack.push(t);
                }
            }
        }
        if seen != self.n_objects {
            return Err(Error::Check("category has a directed cycle".into()));
        }
        Ok(())
    }

    pub fn comp(&self, f: usize, g: usize) -> usize {
        *self.compose.get(&(f, g)).expect("composable morphisms have a composite")
    }

    /// The full subcategory on `keep` (a membership mask), with object and
    /// morphism renumbering maps back to `self`.
    pub fn full_subcategory(&self, keep: &[bool]) -> (AcyclicCategory, Vec<usize>, Vec<usize>) {
        let objs: Vec<usize> = (0..self.n_objects).filter(|&o| keep[o]).collect();
        let mut new_obj = vec![usize::MAX; self.n_objects];
        for (i, &o) in objs.iter().enumerate() {
            new_obj[o] = i;
        }
        let mors: Vec<usize> =
            (0..self.morphisms.len()).filter(|&m| keep[self.morphisms[m].0] && keep[self.morphisms[m].1]).collect();
        let mut new_mor = vec![usize::MAX; self.morphisms.len()];
        for (i, &m) in mors.iter().enumerate() {
            new_mor[m] = i;
        }
        let morphisms = mors.iter().map(|&m| (new_obj[self.morphisms[m].0], new_obj[self.morphisms[m].1])).collect();
        let mut compose = HashMap::new();
        for (&(f, g), &h) in &self.compose {
            if new_mor[f] != usize::MAX && new_mor[g] != usize::MAX {
                compose.insert((new_mor[f], new_mor[g]), new_mor[h]);
            }
        }
        let mut out = vec![Vec::new(); objs.len()];
        for (i, &(s, _)) in mors.iter().map(|&m| self.morphisms[m]).collect::<Vec<_>>().iter().enumerate() {
            out[new_obj[s]].push(i);
        }
        (AcyclicCategory { n_objects: objs.len(), morphisms, compose, out }, objs, mors)
    }
}

/// A nondegenerate simplex of the nerve: a vertex, or a chain of composable
/// non-identity morphisms.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Simplex {
    Vertex(usize),
    Chain(Vec<usize>),
}

/// The nerve of an acyclic category up to a top degree.
#[derive(Clone, Debug)]
pub struct Nerve {
    pub simplices: Vec<Vec<Simplex>>,
    pub index: Vec<HashMap<Simplex, usize>>,
}

impl Nerve {
    pub fn new(cat: &AcyclicCategory, top: usize) -> Nerve {
        let mut simplices: Vec<Vec<Simplex>> = vec![(0..cat.n_objects).map(Simplex::Vertex).collect()];
        if top >= 1 {
            simplices.push((0..cat.morphisms.len()).map(|m| Simplex::Chain(vec![m])).collect());
        }
        for k in 2..=top {
            let mut next = Vec::new();
            for s in &simplices[k - 1] {
                let Simplex::Chain(ms) = s else { unreachable!() };
                let last = *ms.last().expect("chains are nonempty");
                for &m in &cat.out[cat.morphisms[last].1] {
                    let mut c = ms.clone();
                    c.push(m);
                    next.push(Simplex::Chain(c));
                }
            }
            if next.is_empty() {
                break;
            }
            simplices.push(next);
        }
        let index = simplices.iter().map(|l| l.iter().enumerate().map(|(i, s)| (s.clone(), i)).collect()).collect();
        Nerve { simplices, index }
    }

    pub fn top(&self) -> usize {
        self.simplices.len() - 1
    }

    pub fn count(&self, k: usize) -> usize {
        self.simplices.get(k).map_or(0, Vec::len)
    }

    pub fn index_of(&self, k: usize, s: &Simplex) -> Option<usize> {
        self.index.get(k).and_then(|m| m.get(s).copied())
    }

    /// Vertices (objects) of a simplex in order.
    pub fn vertices(cat: &AcyclicCategory, s: &Simplex) -> Vec<usize> {
        match s {
            Simplex::Vertex(o) => vec![*o],
            Simplex::Chain(ms) => {
                let mut v = vec![cat.morphisms[ms[0]].0];
                v.extend(ms.iter().map(|&m| cat.morphisms[m].1));
                v
            }
        }
    }

    /// The `i`-th face of a simplex of degree `k ≥ 1`.
    pub fn face(cat: &AcyclicCategory, s: &Simplex, i: usize) -> Simplex {
        let Simplex::Chain(ms) = s else { panic!("vertices have no faces") };
        let k = ms.len();
        if k == 1 {
            let (src, tgt) = cat.morphisms[ms[0]];
            return Simplex::Vertex(if i == 0 { tgt } else { src });
        }
        let mut c = Vec::with_capacity(k - 1);
        if i == 0 {
            c.extend_from_slice(&ms[1..]);
        } else if i == k {
            c.extend_from_slice(&ms[..k - 1]);
        } else {
            c.extend_from_slice(&ms[..i - 1]);
            c.push(cat.comp(ms[i - 1], ms[i]));
            c.extend_from_slice(&ms[i + 1..]);
        }
        Simplex::Chain(c)
    }

    /// Sparse boundary `∂_k` as columns `(row, coefficient)` indexed by `k`-simplices.
    pub fn boundary(&self, cat: &AcyclicCategory, k: usize) -> Vec<Vec<(usize, i64)>> {
        assert!(k >= 1);
        self.simplices[k]
            .iter()
            .map(|s| {
                let mut col: HashMap<usize, i64> = HashMap::new();
                for i in 0..=k {
                    let f = Self::face(cat, s, i);
                    let r = self.index_of(k - 1, &f).expect("faces of nerve simplices are simplices");
                    *col.entry(r).or_insert(0) += if i % 2 == 0 { 1 } else { -1 };
                }
                let mut col: Vec<(usize, i64)> = col.into_iter().filter(|(_, c)| *c != 0).collect();
                col.sort_unstable();
                col
            })
            .collect()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn rejects_cycles() {
        let r = AcyclicCategory::new(2, vec![(0, 1), (1, 0)], HashMap::new());
        assert!(r.is_err());
    }

    #[test]
    fn nerve_of_chain_poset() {
        // 0 → 1 → 2 with the composite.
        let cat = AcyclicCategory::new(3, vec![(0, 1), (1, 2), (0, 2)], HashMap::from([((0, 1), 2)])).unwrap();
        let n = Nerve::new(&cat, 3);
        assert_eq!((n.count(0), n.count(1), n.count(2), n.count(3)), (3, 3, 1, 0));
        let d2 = n.boundary(&cat, 2);
        // ∂(0→1→2) = (1→2) − (0→2) + (0→1)
        assert_eq!(d2[0], vec![(0, 1), (1, 1), (2, -1)]);
    }

    #[test]
    fn subcategory_renumbers() {
        let cat = AcyclicCategory::new(3, vec![(0, 1), (1, 2), (0, 2)], HashMap::from([((0, 1), 2)])).unwrap();
        let (sub, objs, mors) = cat.full_subcategory(&[true, false, true]);
        assert_eq!(objs, vec![0, 2]);
        assert_eq!(mors, vec![2]);
        assert_eq!(sub.morphisms, vec![(0, 1)]);
        assert!(sub.compose.is_empty());
    }
}
