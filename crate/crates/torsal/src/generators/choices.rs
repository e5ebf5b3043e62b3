use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::hyperplane::{zero_set, SignVector};
use crate::toric::ToricModel;

/// Chamber choices as written in an input file.
///
/// Sign vectors are strings over `+-0`, one character per hyperplane of `A_0`.
#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct ChoiceSet {
    /// `R_M` for one-dimensional layers and `R_H` for hypertori, by name.
    #[serde(default, rename = "R", skip_serializing_if = "BTreeMap::is_empty")]
    pub r: BTreeMap<String, String>,
    /// `B(L)` by layer name.
    #[serde(default, rename = "B", skip_serializing_if = "BTreeMap::is_empty")]
    pub b: BTreeMap<String, String>,
    /// `M_1, …, M_d`.
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub base_layers: Vec<String>,
    /// `N_1(L), …, N_k(L)` by layer name.
    #[serde(default, rename = "N", skip_serializing_if = "BTreeMap::is_empty")]
    pub n: BTreeMap<String, Vec<String>>,
}

pub fn parse_sign(s: &str, len: usize) -> Result<SignVector> {
    let v: SignVector = s
        .chars()
        .map(|c| match c {
            '+' => Ok(1),
            '-' => Ok(-1),
            '0' => Ok(0),
            _ => Err(Error::Input(format!("sign vector {s:?} has a character outside +-0"))),
        })
        .collect::<Result<_>>()?;
    if v.len() != len {
        return Err(Error::Input(format!("sign vector {s:?} has length {}, expected {len}", v.len())));
    }
    Ok(v)
}

pub fn format_sign(v: &[i8]) -> String {
    v.iter().map(|&x| match x.signum() {
        1 => '+',
        -1 => '-',
        _ => '0',
    }).collect()
}

/// Resolved choices; chambers and faces are indices into `A_0`'s face poset.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Choices {
    /// `R_M` per layer, set for one-dimensional layers only.
    pub r_layer: Vec<Option<usize>>,
    /// `R_H` per hypertorus.
    pub r_hyper: Vec<usize>,
    /// `B(L)` per layer.
    pub b: Vec<usize>,
    /// `F(L) = closure(B(L)) ∩ X_L` per layer.
    pub f: Vec<usize>,
    /// Requested `M_i`, empty when they are to be chosen.
    pub base: Vec<usize>,
    /// Requested `N_h(L)`, `None` when they are to be chosen.
    pub n: Vec<Option<Vec<usize>>>,
}

impl Choices {
    /// Fill every missing choice with the lexicographically least eligible chamber.
    pub fn resolve(model: &ToricModel, set: &ChoiceSet) -> Result<Choices> {
        let fp = &model.linear.faces;
        let nh = model.linear.normals.len();
        let layers = &model.layers;
        let d = model.arrangement.dim;
        let chamber = |s: &str| -> Result<usize> {
            let v = parse_sign(s, nh)?;
            fp.index_of(&v)
                .filter(|&c| fp.is_chamber(c))
                .ok_or_else(|| Error::Input(format!("{s} is not a chamber of the linear arrangement")))
        };
        let adjacent = |c: usize, zero: &[usize]| -> Option<usize> {
            let mut trace = fp.sign(c).clone();
            for &z in zero {
                trace[z] = 0;
            }
            fp.index_of(&trace).filter(|&f| zero_set(fp.sign(f)) == zero)
        };
        let least_adjacent = |zero: &[usize]| -> usize {
            let mut cs = fp.chambers();
            cs.sort_by(|a, b| fp.sign(*a).cmp(fp.sign(*b)));
            cs.into_iter().find(|&c| adjacent(c, zero).is_some()).expect("every flat of A_0 bounds a chamber")
        };
        for key in set.r.keys() {
            let known = layers.by_name(key).is_some_and(|l| layers.layers[l].dim() == 1)
                || model.arrangement.index_of(key).is_some();
            if !known {
                return Err(Error::Input(format!("R names {key}, which is neither a one-dimensional layer nor a hypertorus")));
            }
        }
        for key in set.b.keys().chain(set.n.keys()) {
            if layers.by_name(key).is_none() {
                return Err(Error::Input(format!("unknown layer {key}")));
            }
        }
        let mut r_layer = vec![None; layers.len()];
        for (l, layer) in layers.layers.iter().enumerate() {
            if layer.dim() != 1 {
                continue;
            }
            let zero = model.x_layer(l);
            let c = match set.r.get(&layer.name) {
                Some(s) => chamber(s)?,
                None => least_adjacent(&zero),
            };
            if adjacent(c, &zero).is_none() {
                return Err(Error::Input(format!("R for {} is not adjacent to its flat", layer.name)));
            }
            r_layer[l] = Some(c);
        }
        let mut r_hyper = Vec::with_capacity(model.arrangement.len());
        for (i, h) in model.arrangement.hypertori.iter().enumerate() {
            let zero = vec![model.linear.of_hypertorus[i]];
            r_hyper.push(match set.r.get(&h.name) {
                Some(s) => chamber(s)?,
                None => least_adjacent(&zero),
            });
        }
        let mut b = Vec::with_capacity(layers.len());
        let mut f = Vec::with_capacity(layers.len());
        for (l, layer) in layers.layers.iter().enumerate() {
            let zero = model.x_layer(l);
            let c = match set.b.get(&layer.name) {
                Some(s) => chamber(s)?,
                None => least_adjacent(&zero),
            };
            let face = adjacent(c, &zero)
                .ok_or_else(|| Error::Input(format!("B for {} meets its flat in less than full dimension", layer.name)))?;
            b.push(c);
            f.push(face);
        }
        let one_dim = |name: &str| -> Result<usize> {
            layers
                .by_name(name)
                .filter(|&l| layers.layers[l].dim() == 1)
                .ok_or_else(|| Error::Input(format!("{name} is not a one-dimensional layer")))
        };
        let base = set.base_layers.iter().map(|s| one_dim(s)).collect::<Result<Vec<_>>>()?;
        if !base.is_empty() && base.len() != d {
            return Err(Error::Input(format!("base_layers lists {} layers, expected {d}", base.len())));
        }
        let mut n = vec![None; layers.len()];
        for (name, list) in &set.n {
            let l = layers.by_name(name).expect("checked above");
            let ns = list.iter().map(|s| one_dim(s)).collect::<Result<Vec<_>>>()?;
            if ns.len() != layers.layers[l].dim() || ns.iter().any(|&m| !layers.leq(l, m)) {
                return Err(Error::Input(format!("N for {name} must list dim({name}) one-dimensional layers inside it")));
            }
            n[l] = Some(ns);
        }
        Ok(Choices { r_layer, r_hyper, b, f, base, n })
    }

    /// The chamber `B(T)`.
    pub fn base_chamber(&self) -> usize {
        self.b[0]
    }

    /// Write the choices back in file form.
    pub fn to_set(&self, model: &ToricModel) -> ChoiceSet {
        let fp = &model.linear.faces;
        let mut set = ChoiceSet::default();
        for (l, r) in self.r_layer.iter().enumerate() {
            if let Some(c) = r {
                set.r.insert(model.layers.layers[l].name.clone(), format_sign(fp.sign(*c)));
            }
        }
        for (i, &c) in self.r_hyper.iter().enumerate() {
            set.r.insert(model.arrangement.hypertori[i].name.clone(), format_sign(fp.sign(c)));
        }
        for (l, &c) in self.b.iter().enumerate() {
            set.b.insert(model.layers.layers[l].name.clone(), format_sign(fp.sign(c)));
        }
        set.base_layers = self.base.iter().map(|&l| model.layers.layers[l].name.clone()).collect();
        for (l, ns) in self.n.iter().enumerate() {
            if let Some(ns) = ns {
                set.n.insert(model.layers.layers[l].name.clone(), ns.iter().map(|&m| model.layers.layers[m].name.clone()).collect());
            }
        }
        set
    }
}
