//! The JSON arrangement document.
//!
//! Offsets and points are exact fractions `{"num": n, "den": d}`; floats are rejected.

use std::collections::BTreeMap;

use num_bigint::BigInt;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::generators::ChoiceSet;
use crate::lattice::Q;
use crate::toric::{Hypertorus, ToricArrangement};

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Fraction {
    pub num: i64,
    pub den: i64,
}

impl Fraction {
    pub fn to_q(&self, what: &str) -> Result<Q> {
        if self.den == 0 {
            return Err(Error::Input(format!("{what}: zero denominator")));
        }
        Ok(Q::new(BigInt::from(self.num), BigInt::from(self.den)))
    }

    /// Fails when the reduced value does not fit `i64`.
    pub fn from_q(q: &Q) -> Result<Fraction> {
        let conv = |x: &BigInt| i64::try_from(x.clone()).map_err(|_| Error::Overflow);
        Ok(Fraction { num: conv(q.numer())?, den: conv(q.denom())? })
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct HypertorusSpec {
    pub name: String,
    pub chi: Vec<i64>,
    pub offset: Fraction,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ArrangementSpec {
    pub dimension: usize,
    pub hypertori: Vec<HypertorusSpec>,
    /// Hypertorus names from least to greatest; input order when absent.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub ordering: Option<Vec<String>>,
    /// Layer names, each attached to a point the layer is the smallest one to contain.
    #[serde(default, skip_serializing_if = "BTreeMap::is_empty")]
    pub layers: BTreeMap<String, Vec<Fraction>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub choices: Option<ChoiceSet>,
}

impl ArrangementSpec {
    pub fn parse(text: &str) -> Result<ArrangementSpec> {
        serde_json::from_str(text).map_err(|e| Error::Input(format!("line {}, column {}: {e}", e.line(), e.column())))
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("the document serializes")
    }

    pub fn arrangement(&self) -> Result<ToricArrangement> {
        let hypertori = self
            .hypertori
            .iter()
            .map(|h| {
                Ok(Hypertorus {
                    name: h.name.clone(),
                    chi: h.chi.iter().map(|&x| BigInt::from(x)).collect(),
                    offset: h.offset.to_q(&format!("offset of {}", h.name))?,
                })
            })
            .collect::<Result<Vec<_>>>()?;
        let ordering = match &self.ordering {
            None => None,
            Some(names) => Some(
                names
                    .iter()
                    .map(|n| {
                        self.hypertori
                            .iter()
                            .position(|h| &h.name == n)
                            .ok_or_else(|| Error::Input(format!("ordering names unknown hypertorus {n}")))
                    })
                    .collect::<Result<Vec<_>>>()?,
            ),
        };
        let mut arr = ToricArrangement::new(self.dimension, hypertori, ordering)?;
        for (name, point) in &self.layers {
            if point.len() != self.dimension {
                return Err(Error::Input(format!("point of layer {name} has {} coordinates", point.len())));
            }
            let p = point.iter().map(|x| x.to_q(&format!("point of layer {name}"))).collect::<Result<Vec<_>>>()?;
            arr.layer_names.push((name.clone(), p));
        }
        Ok(arr)
    }

    /// The document describing an arrangement, without choices.
    pub fn from_arrangement(arr: &ToricArrangement) -> Result<ArrangementSpec> {
        let conv = |x: &BigInt| i64::try_from(x.clone()).map_err(|_| Error::Overflow);
        let hypertori = arr
            .hypertori
            .iter()
            .map(|h| {
                Ok(HypertorusSpec {
                    name: h.name.clone(),
                    chi: h.chi.iter().map(conv).collect::<Result<_>>()?,
                    offset: Fraction::from_q(&h.offset)?,
                })
            })
            .collect::<Result<Vec<_>>>()?;
        let layers = arr
            .layer_names
            .iter()
            .map(|(n, p)| Ok((n.clone(), p.iter().map(Fraction::from_q).collect::<Result<Vec<_>>>()?)))
            .collect::<Result<_>>()?;
        Ok(ArrangementSpec {
            dimension: arr.dim,
            hypertori,
            ordering: Some(arr.ordering.iter().map(|&i| arr.hypertori[i].name.clone()).collect()),
            layers,
            choices: None,
        })
    }
}
