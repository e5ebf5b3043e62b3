//! The classes `ω_{S,L}`, found by solving their restriction conditions.
//!
//! For every piece `S_{Y,F0}` let `Ȳ` be the component through `Y` of the
//! intersection of the hypertori of `S` containing `Y`. The class restricts
//! to `ω_S / |Stab(Ȳ)|` when `L ⊆ Ȳ` and to zero otherwise.

use num_traits::Zero;

use super::Generators;
use crate::error::{Error, Result};
use crate::lattice::{rank_q, solve_q, Q};

#[derive(Clone, Debug)]
pub struct OmegaSL {
    pub layer: usize,
    /// `S` in the total order.
    pub set: Vec<usize>,
    pub class: Vec<Q>,
    /// Dimension of the space of solutions; zero when the class is unique.
    pub kernel: usize,
    pub integral: bool,
    /// Number of scalar conditions imposed.
    pub conditions: usize,
}

impl Generators<'_> {
    /// Every `(L, S)` with `S ∈ nbc(A[L])` and `|S| = rk L`, in layer order.
    pub fn slots(&self) -> Vec<(usize, Vec<usize>)> {
        let mut out = Vec::new();
        for (l, lb) in self.locals.iter().enumerate() {
            let r = self.model.layers.layers[l].rank;
            if let Some(level) = lb.nbc.get(r) {
                out.extend(level.iter().map(|s| (l, s.clone())));
            }
        }
        out
    }

    /// The right-hand side of the conditions on one piece, or `None` when the restriction must vanish.
    fn target(&self, l: usize, s: &[usize], y: usize) -> Option<Q> {
        let model = self.model;
        let closure = model.closure_in(s, y);
        model.layers.leq(closure, l).then(|| {
            let stab = model.layer_stabilizer(s, closure).len();
            Q::new(1.into(), stab.into())
        })
    }

    pub fn omega_sl(&self, l: usize, s: &[usize]) -> Result<OmegaSL> {
        let r = self.model.layers.layers[l].rank;
        if s.len() != r {
            return Err(Error::Input(format!("|S| = {} differs from the rank {r}", s.len())));
        }
        let set = self.in_order(s);
        let omega_s = self.omega_product(&set)?;
        let cols = self.sal.betti(r);
        let mut rows = Vec::new();
        let mut rhs = Vec::new();
        for piece in &self.pieces {
            let restricted = piece.restrict(r, &omega_s);
            let factor = self.target(l, &set, piece.layer);
            for (row, value) in piece.restriction[r].iter().zip(&restricted) {
                rows.push(row.clone());
                rhs.push(factor.as_ref().map_or_else(Q::zero, |f| value * f));
            }
        }
        let name = || format!("ω_{{S,L}} for L = {}", self.model.layers.layers[l].name);
        let class = solve_q(&rows, &rhs, cols).ok_or_else(|| Error::Check(format!("{}: the conditions are inconsistent", name())))?;
        for (row, b) in rows.iter().zip(&rhs) {
            let v = row.iter().zip(&class).fold(Q::zero(), |acc, (a, x)| acc + a * x);
            if &v != b {
                return Err(Error::Check(format!("{}: the solution fails a condition", name())));
            }
        }
        let kernel = cols - rank_q(&rows, cols);
        let integral = class.iter().all(|x| x.is_integer());
        Ok(OmegaSL { layer: l, set, class, kernel, integral, conditions: rows.len() })
    }

    /// `ω_{S,L}` for every slot.
    pub fn all_omega_sl(&self) -> Result<Vec<OmegaSL>> {
        self.slots().into_iter().map(|(l, s)| self.omega_sl(l, &s)).collect()
    }
}

#[cfg(test)]
mod tests {
    use super::super::tests::{example_model, with_table_choices};

    #[test]
    fn low_rank_slots_are_the_unit_and_the_omegas() {
        let model = example_model();
        let g = with_table_choices(&model);
        let t = g.omega_sl(0, &[]).unwrap();
        assert_eq!(t.class, g.sal.unit().unwrap());
        for h in 0..3 {
            let l = model.layers.by_name(&model.arrangement.hypertori[h].name).unwrap();
            let w = g.omega_sl(l, &[h]).unwrap();
            assert_eq!(w.kernel, 0);
            assert_eq!(w.class, g.omega(h));
        }
    }

    #[test]
    fn every_slot_is_unique_and_integral() {
        let model = example_model();
        let g = with_table_choices(&model);
        let all = g.all_omega_sl().unwrap();
        assert_eq!(all.len(), 7);
        assert!(all.iter().all(|w| w.kernel == 0 && w.integral));
        let q = model.layers.by_name("Q").unwrap();
        let at_q: Vec<_> = all.iter().filter(|w| w.layer == q).collect();
        assert_eq!(at_q.len(), 1);
        assert_eq!(at_q[0].set, vec![0, 1]);
        assert_eq!(g.omega_sl(q, &[0, 1]).unwrap().class.len(), 7);
        assert!(g.omega_sl(q, &[0]).is_err());
    }
}
