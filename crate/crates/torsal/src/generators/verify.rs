//! Independent checks of the generator data, grouped in suites.
//!
//! Every check compares two routes to the same quantity; a failure carries
//! both values in its detail. A suite that cannot run on the input reports
//! `Inapplicable` instead of failing.

use std::fmt;
use std::str::FromStr;

use num_bigint::BigInt;
use num_traits::{One, Zero};
use serde::Serialize;

use super::{boundary, format_sign, mat_vec, nerve_chain, scale, sub, subsets, ChoiceSet, Choices, Generators, OmegaSL};
use crate::cohomology::{is_zero_q, unit_vector, Space};
use crate::error::{Error, Result};
use crate::hyperplane::zero_set;
use crate::lattice::{det_q, dot_q, rank_q, smith_normal_form, solve_q, to_q, IntMatrix, Q};
use crate::toric::ToricModel;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Status {
    Pass,
    Fail,
    Inapplicable,
}

impl fmt::Display for Status {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Status::Pass => "pass",
            Status::Fail => "FAIL",
            Status::Inapplicable => "inapplicable",
        })
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct Check {
    pub suite: String,
    pub name: String,
    pub status: Status,
    pub detail: String,
}

#[derive(Clone, Debug, Default, Serialize)]
pub struct Report {
    pub checks: Vec<Check>,
}

impl Report {
    pub fn push(&mut self, suite: Suite, name: impl Into<String>, ok: bool, detail: impl Into<String>) {
        let status = if ok { Status::Pass } else { Status::Fail };
        self.checks.push(Check { suite: suite.to_string(), name: name.into(), status, detail: detail.into() });
    }

    pub fn inapplicable(&mut self, suite: Suite, name: impl Into<String>, detail: impl Into<String>) {
        self.checks.push(Check { suite: suite.to_string(), name: name.into(), status: Status::Inapplicable, detail: detail.into() });
    }

    /// No check failed.
    pub fn passed(&self) -> bool {
        self.checks.iter().all(|c| c.status != Status::Fail)
    }

    pub fn of_suite(&self, suite: Suite) -> impl Iterator<Item = &Check> {
        let name = suite.to_string();
        self.checks.iter().filter(move |c| c.suite == name)
    }

    pub fn find(&self, suite: Suite, name: &str) -> Option<&Check> {
        self.of_suite(suite).find(|c| c.name == name)
    }

    pub fn to_tsv(&self) -> String {
        let mut out = String::from("suite\tcheck\tstatus\tdetail\n");
        for c in &self.checks {
            out.push_str(&format!("{}\t{}\t{}\t{}\n", c.suite, c.name, c.status, c.detail.replace(['\t', '\n'], " ")));
        }
        out
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize)]
pub enum Suite {
    Chains,
    Homology,
    Restriction,
    OmegaSl,
    Injectivity,
    Generation,
    Coherence,
}

impl Suite {
    pub const ALL: [Suite; 7] = [
        Suite::Chains,
        Suite::Homology,
        Suite::Restriction,
        Suite::OmegaSl,
        Suite::Injectivity,
        Suite::Generation,
        Suite::Coherence,
    ];
}

impl fmt::Display for Suite {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Suite::Chains => "chains",
            Suite::Homology => "homology",
            Suite::Restriction => "restriction",
            Suite::OmegaSl => "omega-sl",
            Suite::Injectivity => "injectivity",
            Suite::Generation => "generation",
            Suite::Coherence => "coherence",
        })
    }
}

impl FromStr for Suite {
    type Err = Error;
    fn from_str(s: &str) -> Result<Suite> {
        Suite::ALL
            .into_iter()
            .find(|x| x.to_string() == s)
            .ok_or_else(|| Error::Input(format!("unknown suite {s}; expected one of chains, homology, restriction, omega-sl, injectivity, generation, coherence")))
    }
}

/// Run the suites on a model with the given choices.
pub fn run(model: &ToricModel, set: &ChoiceSet, suites: &[Suite]) -> Result<Report> {
    let mut report = Report::default();
    let needs_generators = suites.iter().any(|&s| s != Suite::Coherence);
    let gen = if needs_generators { Some(Generators::new(model, Choices::resolve(model, set)?)?) } else { None };
    let omegas = match (&gen, suites.iter().any(|s| matches!(s, Suite::OmegaSl | Suite::Generation))) {
        (Some(g), true) => Some(g.all_omega_sl()),
        _ => None,
    };
    for &suite in suites {
        let outcome = match suite {
            Suite::Coherence => coherence(model, &mut report),
            _ => {
                let g = gen.as_ref().expect("built above");
                let omegas = || -> Result<&Vec<OmegaSL>> {
                    omegas.as_ref().expect("solved above").as_ref().map_err(|e| Error::Check(e.to_string()))
                };
                match suite {
                    Suite::Chains => chains(g, &mut report),
                    Suite::Homology => homology(g, &mut report),
                    Suite::Restriction => restriction(g, &mut report),
                    Suite::OmegaSl => omegas().and_then(|w| omega_sl(g, w, &mut report)),
                    Suite::Injectivity => injectivity(g, &mut report),
                    Suite::Generation => omegas().and_then(|w| generation(g, w, &mut report)),
                    Suite::Coherence => unreachable!(),
                }
            }
        };
        if let Err(e) = outcome {
            report.push(suite, "suite", false, format!("aborted: {e}"));
        }
    }
    Ok(report)
}

fn show(v: &[Q]) -> String {
    let parts: Vec<String> = v.iter().map(|x| x.to_string()).collect();
    format!("[{}]", parts.join(", "))
}

fn int_matrix(rows: &[Vec<Q>], cols: usize) -> Result<IntMatrix> {
    let ints = rows
        .iter()
        .map(|r| r.iter().map(|x| if x.is_integer() { Ok(x.to_integer()) } else { Err(Error::Check(format!("non-integral entry {x}"))) }).collect())
        .collect::<Result<Vec<Vec<BigInt>>>>()?;
    Ok(IntMatrix::from_rows_with_cols(&ints, cols))
}

/// Rank and whether every nonzero invariant factor is one.
fn smith_summary(rows: &[Vec<Q>], cols: usize) -> Result<(usize, bool)> {
    let snf = smith_normal_form(&int_matrix(rows, cols)?);
    let unimodular = snf.diagonal().iter().all(|x| x.is_zero() || x == &BigInt::one());
    Ok((snf.rank, unimodular))
}

fn pairing_is_identity(classes: &[Vec<Q>], cycles: &[Vec<Q>]) -> bool {
    classes.len() == cycles.len()
        && classes.iter().enumerate().all(|(i, x)| cycles.iter().enumerate().all(|(j, z)| dot_q(x, z) == if i == j { Q::one() } else { Q::zero() }))
}

/// The face category of the compact torus and the projection maps in each degree.
struct Torus {
    space: Space,
    maps: Vec<Vec<Option<usize>>>,
}

impl Torus {
    fn new(g: &Generators) -> Result<Torus> {
        let d = g.dim();
        let space = Space::new(g.model.faces.category().0, d)?;
        let proj = g.model.projection();
        let maps = (0..=d).map(|k| proj.simplex_map(&g.sal.nerve, &space.nerve, k)).collect();
        Ok(Torus { space, maps })
    }

    /// An integral basis of `H^k(T)` pulled back to `Sal(A)`.
    fn classes(&self, g: &Generators, k: usize) -> Result<Vec<Vec<Q>>> {
        let b = self.space.betti(k);
        (0..b).map(|i| self.space.restrict(&g.sal, &self.maps[k], k, &unit_vector(b, i))).collect()
    }
}

fn chains(g: &Generators, report: &mut Report) -> Result<()> {
    let s = Suite::Chains;
    let model = g.model;
    let cycles = g.cycles();
    let fp = &model.linear.faces;
    let chambers = fp.chambers();
    let d = g.dim();
    let one_dim: Vec<usize> = (0..model.layers.len()).filter(|&l| model.layers.layers[l].dim() == 1).collect();

    let mut not_closed = Vec::new();
    let mut bad_pairs = Vec::new();
    let mut bad_classes = Vec::new();
    let mut pairs = 0;
    for &m in &one_dim {
        let name = &model.layers.layers[m].name;
        let lambdas = chambers.iter().map(|&c| cycles.lambda(m, c)).collect::<Result<Vec<_>>>()?;
        for l in &lambdas {
            if !boundary(model, &l.chain).is_empty() {
                not_closed.push(format!("Λ^{name}_{}", format_sign(fp.sign(l.chamber))));
            }
        }
        for (a, la) in lambdas.iter().enumerate() {
            for (b, lb) in lambdas.iter().enumerate() {
                pairs += 1;
                let (ca, cb) = (chambers[a], chambers[b]);
                let lhs = sub(&la.chain, &lb.chain);
                let rhs = cycles.basis_change_rhs(m, ca, cb)?;
                if lhs != rhs {
                    bad_pairs.push(format!("{name} {}→{}", format_sign(fp.sign(ca)), format_sign(fp.sign(cb))));
                }
                let class = g.sal.cycle_class(1, &nerve_chain(&g.sal, &lhs))?;
                let mut expected = vec![Q::zero(); class.len()];
                for (&h, &w) in &cycles.basis_change_weights(m, ca, cb)? {
                    for (e, x) in expected.iter_mut().zip(&g.hat[d + h]) {
                        *e += x * Q::from_integer(w.into());
                    }
                }
                if class != expected {
                    bad_classes.push(format!("{name} {}→{}: {} vs {}", format_sign(fp.sign(ca)), format_sign(fp.sign(cb)), show(&class), show(&expected)));
                }
            }
        }
    }
    report.push(s, "basis change holds on chains", bad_pairs.is_empty(), format!("{pairs} ordered pairs; failing: {}", bad_pairs.join(", ")));
    report.push(s, "basis change holds in homology", bad_classes.is_empty(), bad_classes.join("; "));

    // Ξ(H;B,P) and Ω over the wall it crosses.
    let fc = &model.faces;
    let mut xi_count = 0;
    let mut bad_xi = Vec::new();
    for &m in &one_dim {
        let a_m = &model.layers.layers[m].hypertori;
        for p in model.faces_in_layer(m).into_iter().filter(|&p| fc.faces[p].dim == 0) {
            let path = cycles.local_path(m, p)?;
            for &h in fc.faces[p].hypertori.iter().filter(|h| !a_m.contains(h)) {
                let pos = fc.faces[p].local.binary_search(&model.linear.of_hypertorus[h]).expect("H passes through P");
                let i = path.wall_at(pos).ok_or_else(|| Error::Check("no wall of the path spans H".into()))?;
                let fm = fc
                    .from(p)
                    .into_iter()
                    .find(|&k| fc.morphisms[k].fm == path.walls[i] && cycles.support_hypertorus(fc.morphisms[k].tgt) == Some(h))
                    .ok_or_else(|| Error::Check("no face morphism over the wall".into()))?;
                let omega = cycles.omega(fm)?;
                for &c in &chambers {
                    xi_count += 1;
                    let xi = cycles.xi(m, h, c, p)?;
                    if !boundary(model, &xi).is_empty() {
                        not_closed.push(format!("Ξ at {}", model.arrangement.hypertori[h].name));
                    }
                    let sign = cycles.epsilon(h, c) * cycles.eta(m, h)?;
                    if xi != scale(&omega, sign) {
                        bad_xi.push(format!("{} at vertex {p} of {}", model.arrangement.hypertori[h].name, model.layers.layers[m].name));
                    }
                }
            }
        }
    }
    report.push(s, "Ξ equals εη·Ω over its wall", bad_xi.is_empty(), format!("{xi_count} squares; failing: {}", bad_xi.join(", ")));

    let mut omega_count = 0;
    let mut bad_omega = Vec::new();
    for h in 0..model.arrangement.len() {
        for fm in cycles.omega_morphisms(h) {
            omega_count += 1;
            let z = cycles.omega(fm)?;
            if !boundary(model, &z).is_empty() {
                not_closed.push(format!("Ω^({fm})"));
            }
            if g.sal.cycle_class(1, &nerve_chain(&g.sal, &z))? != g.hat[d + h] {
                bad_omega.push(format!("{} via morphism {fm}", model.arrangement.hypertori[h].name));
            }
        }
    }
    report.push(s, "Ω^(m) has the class of ω̂_H for every m", bad_omega.is_empty(), format!("{omega_count} squares; failing: {}", bad_omega.join(", ")));
    report.push(s, "every constructed chain is a cycle", not_closed.is_empty(), not_closed.join(", "));

    let bt = g.choices.base_chamber();
    let mut galleries = 0;
    let mut bad_gallery = Vec::new();
    for &m in &one_dim {
        let default = cycles.gallery(m)?;
        let reference = g.sal.cycle_class(1, &nerve_chain(&g.sal, &cycles.lambda(m, bt)?.chain))?;
        let all = fp.minimal_galleries(default[0], *default.last().expect("galleries are nonempty"));
        for gal in all {
            galleries += 1;
            let alt = g.cycles().with_gallery(m, gal)?;
            let l = alt.lambda(m, bt)?;
            let class = g.sal.cycle_class(1, &nerve_chain(&g.sal, &l.chain))?;
            if !boundary(model, &l.chain).is_empty() || class != reference {
                bad_gallery.push(model.layers.layers[m].name.clone());
            }
        }
    }
    report.push(s, "Λ is independent of the minimal gallery in homology", bad_gallery.is_empty(), format!("{galleries} galleries; failing: {}", bad_gallery.join(", ")));
    Ok(())
}

/// Coefficients of `(1+t)^a t^b`.
fn binomial_shift(a: usize, b: usize, out: &mut [usize], times: usize) {
    let mut c = 1usize;
    for i in 0..=a {
        if let Some(slot) = out.get_mut(b + i) {
            *slot += c * times;
        }
        c = c * (a - i) / (i + 1);
    }
}

fn homology(g: &Generators, report: &mut Report) -> Result<()> {
    let s = Suite::Homology;
    let model = g.model;
    let d = g.dim();
    let bettis = g.sal.bettis(d);
    report.push(s, "Betti numbers", true, format!("{bettis:?}"));
    report.push(s, "integral homology is torsion-free", g.sal.is_torsion_free(), "");
    let mut poincare = vec![0usize; d + 1];
    for (l, layer) in model.layers.layers.iter().enumerate() {
        let count = g.locals[l].nbc.get(layer.rank).map_or(0, Vec::len);
        binomial_shift(layer.dim(), layer.rank, &mut poincare, count);
    }
    report.push(s, "Poincaré polynomial from layers equals the Smith normal form ranks", poincare == bettis, format!("layers {poincare:?}, complex {bettis:?}"));
    report.push(s, "global dual basis pairs to the identity", pairing_is_identity(&g.classes, &g.hat), format!("size {}", g.hat.len()));
    let bad: Vec<String> = g
        .locals
        .iter()
        .filter(|lb| !pairing_is_identity(&lb.dual, &lb.hat))
        .map(|lb| model.layers.layers[lb.layer].name.clone())
        .collect();
    report.push(s, "local dual bases pair to the identity", bad.is_empty(), bad.join(", "));

    let torus = Torus::new(g)?;
    let cycles = g.cycles();
    let mut bad_proj = Vec::new();
    for h in 0..model.arrangement.len() {
        let z = nerve_chain(&g.sal, &cycles.omega_hat(h)?);
        if !is_zero_q(&torus.space.push_cycle(&torus.maps[1], 1, &z)?) {
            bad_proj.push(model.arrangement.hypertori[h].name.clone());
        }
    }
    report.push(s, "ω̂_H vanishes on the compact torus", bad_proj.is_empty(), bad_proj.join(", "));
    let windings = g.base.iter().map(|&m| Ok(to_q(&g.winding(m)?))).collect::<Result<Vec<_>>>()?;
    let pushed = g
        .base
        .iter()
        .map(|&m| torus.space.push_cycle(&torus.maps[1], 1, &nerve_chain(&g.sal, &g.lambda_hat(m, g.choices.base_chamber())?)))
        .collect::<Result<Vec<_>>>()?;
    report.push(
        s,
        "λ̂^{M_i} span H_1 of the compact torus",
        rank_q(&pushed, torus.space.betti(1)) == d && rank_q(&windings, d) == d,
        "",
    );

    // Deleting H kills ω̂_H; the rank-one quotient by H detects it.
    for h in 0..model.arrangement.len() {
        let name = &model.arrangement.hypertori[h].name;
        let keep: Vec<usize> = (0..model.arrangement.len()).filter(|&k| k != h).collect();
        let z = nerve_chain(&g.sal, &cycles.omega_hat(h)?);
        match model.deletion(&keep) {
            Ok((sub_model, map, _)) => {
                let space = Space::new(sub_model.salvetti.category.clone(), 1)?;
                let simplex = map.functor.simplex_map(&g.sal.nerve, &space.nerve, 1);
                let pushed = space.push_cycle(&simplex, 1, &z)?;
                report.push(s, format!("deleting {name} kills ω̂_{name}"), is_zero_q(&pushed), show(&pushed));
            }
            Err(e) => report.inapplicable(s, format!("deleting {name} kills ω̂_{name}"), e.to_string()),
        }
        let Some(l) = (0..model.layers.len()).find(|&l| {
            let layer = &model.layers.layers[l];
            layer.rank == 1 && layer.hypertori == [h]
        }) else {
            report.inapplicable(s, format!("the quotient by {name} detects ω̂_{name}"), "the hypertorus is not a layer of its own");
            continue;
        };
        let quotient = model.quotient(l)?;
        let space = Space::new(quotient.model.salvetti.category.clone(), 1)?;
        let simplex = quotient.map.functor.simplex_map(&g.sal.nerve, &space.nerve, 1);
        let mut ok = !is_zero_q(&space.push_cycle(&simplex, 1, &z)?);
        for other in (0..model.arrangement.len()).filter(|&k| k != h) {
            let zo = nerve_chain(&g.sal, &cycles.omega_hat(other)?);
            ok &= is_zero_q(&space.push_cycle(&simplex, 1, &zo)?);
        }
        report.push(s, format!("the quotient by {name} detects ω̂_{name}"), ok, "");
    }
    Ok(())
}

fn restriction(g: &Generators, report: &mut Report) -> Result<()> {
    let s = Suite::Restriction;
    let model = g.model;
    let d = g.dim();
    let cycles = g.cycles();
    let bt = g.choices.base_chamber();
    let base_windings = g.base.iter().map(|&m| Ok(to_q(&g.winding(m)?))).collect::<Result<Vec<_>>>()?;
    // Columns are the windings of the M_i, so that `cols · a = w` solves for a.
    let cols: Vec<Vec<Q>> = (0..d).map(|r| base_windings.iter().map(|w| w[r].clone()).collect()).collect();
    let nh = model.arrangement.len();
    for (l, lb) in g.locals.iter().enumerate() {
        let layer = &model.layers.layers[l];
        let k = lb.lambda_count();
        let bl = g.choices.b[l];
        let mut a = Vec::with_capacity(k);
        let mut omega_part = Vec::with_capacity(k);
        let mut residual = Vec::with_capacity(k);
        let mut cycle_relation = true;
        for &n in &lb.n {
            let w = to_q(&g.winding(n)?);
            let ah = solve_q(&cols, &w, d).ok_or_else(|| Error::Check("windings of the base do not span".into()))?;
            // The global class of λ̂^{N}_{B(T)}: its λ coordinates must be a_h.
            let global = mat_vec(&g.classes, &g.sal.cycle_class(1, &nerve_chain(&g.sal, &g.lambda_hat(n, bt)?))?);
            cycle_relation &= global[..d] == ah[..];
            residual.push(global[d..].to_vec());
            let weights = cycles.basis_change_weights(n, bl, bt)?;
            let o = Q::from_integer(g.orientation(n)?.into());
            omega_part.push((0..nh).map(|h| Q::from_integer(weights.get(&h).copied().unwrap_or(0).into()) * &o).collect::<Vec<_>>());
            a.push(ah);
        }
        report.push(s, format!("{}: a_hi from windings match the global λ coordinates", layer.name), cycle_relation, "");
        let mut mismatches = Vec::new();
        let mut omitted = Vec::new();
        for i in 0..d {
            let route1 = g.restrict_to_layer(l, 1, g.lambda(i));
            let mut route2 = vec![Q::zero(); route1.len()];
            for h in 0..k {
                route2[h] = a[h][i].clone();
            }
            if route1 != route2 {
                mismatches.push(format!("λ^{}: {} vs {}", model.layers.layers[g.base[i]].name, show(&route1), show(&route2)));
            }
        }
        for h in 0..nh {
            let route1 = g.restrict_to_layer(l, 1, g.omega(h));
            let mut route2 = vec![Q::zero(); route1.len()];
            for (j, part) in omega_part.iter().enumerate() {
                route2[j] = part[h].clone();
            }
            if let Some(pos) = lb.hypertori.iter().position(|&x| x == h) {
                route2[k + pos] = Q::one();
            }
            if route1 != route2 {
                let mut corrected = route2.clone();
                for (j, r) in residual.iter().enumerate() {
                    corrected[j] += &r[h];
                }
                if route1 == corrected {
                    omitted.push(format!("ω_{} (λ̂^N_B(T) carries ω̂ terms {})", model.arrangement.hypertori[h].name, show(&residual.iter().map(|r| r[h].clone()).collect::<Vec<_>>())));
                } else {
                    mismatches.push(format!("ω_{}: {} vs {}", model.arrangement.hypertori[h].name, show(&route1), show(&route2)));
                }
            }
        }
        let mut detail = mismatches.join("; ");
        if !omitted.is_empty() {
            detail = format!("{detail} formula omits the ω̂ part of λ̂^N_(B(T)) for {}", omitted.join(", "));
        }
        report.push(s, format!("{}: cochain restriction equals the closed formulas in degree one", layer.name), mismatches.is_empty() && omitted.is_empty(), detail);

        // Global λ-monomials land in the ideal generated by the local λ's, and vanish past dim L.
        let mut ideal_ok = true;
        let mut vanish_ok = true;
        for deg in 1..=d {
            for i in 0..d {
                for y in 0..g.sal.betti(deg - 1) {
                    let x = g.sal.cup(1, g.lambda(i), deg - 1, &unit_vector(g.sal.betti(deg - 1), y))?;
                    let c = g.restrict_to_layer(l, deg, &x);
                    ideal_ok &= lb.monomials[deg].iter().zip(&c).all(|(m, v)| !m.lambdas.is_empty() || v.is_zero());
                }
            }
            if deg > layer.dim() {
                for set in subsets(d, deg) {
                    let x = g.sal.product(&set.iter().map(|&i| g.lambda(i).to_vec()).collect::<Vec<_>>())?;
                    vanish_ok &= is_zero_q(&g.restrict_to_layer(l, deg, &x));
                }
            }
        }
        report.push(s, format!("{}: the global λ-ideal restricts into the local λ-ideal", layer.name), ideal_ok, "");
        report.push(s, format!("{}: products of more than dim L λ's restrict to zero", layer.name), vanish_ok, "");
    }
    quotient_pullbacks(g, report)
}

/// Pulling back `ω_{π(H)}` along `Sal(A) → Sal(A/L)` gives `ω_H`.
fn quotient_pullbacks(g: &Generators, report: &mut Report) -> Result<()> {
    let s = Suite::Restriction;
    let model = g.model;
    let fp = &model.linear.faces;
    for (l, layer) in model.layers.layers.iter().enumerate().skip(1) {
        let name = format!("{}: pulling back from the quotient gives ω_H", layer.name);
        let q = model.quotient(l)?;
        let qfp = &q.model.linear.faces;
        let carry = |c: usize| -> String {
            let sign = fp.sign(c);
            format_sign(&q.matching.iter().map(|&(h, s)| s * sign[h]).collect::<Vec<_>>())
        };
        let mut set = ChoiceSet::default();
        set.b.insert("T".into(), carry(g.choices.base_chamber()));
        for (k, &h) in layer.hypertori.iter().enumerate() {
            set.r.insert(q.model.arrangement.hypertori[q.image[k]].name.clone(), carry(g.choices.r_hyper[h]));
        }
        if q.model.layers.layers[0].name != "T" {
            report.inapplicable(s, name, "the quotient's top layer is not named T");
            continue;
        }
        let qchoices = match Choices::resolve(&q.model, &set) {
            Ok(c) if qfp.is_chamber(c.base_chamber()) => c,
            Ok(_) | Err(_) => {
                report.inapplicable(s, name, "the chosen chambers do not descend to the quotient");
                continue;
            }
        };
        let qg = Generators::new(&q.model, qchoices)?;
        let simplex = q.map.functor.simplex_map(&g.sal.nerve, &qg.sal.nerve, 1);
        let mut bad = Vec::new();
        for (k, &h) in layer.hypertori.iter().enumerate() {
            let pulled = qg.sal.restrict(&g.sal, &simplex, 1, qg.omega(q.image[k]))?;
            if pulled != g.omega(h) {
                bad.push(format!("ω_{}: {} vs {}", model.arrangement.hypertori[h].name, show(&pulled), show(g.omega(h))));
            }
        }
        report.push(s, name, bad.is_empty(), bad.join("; "));
    }
    Ok(())
}

fn omega_sl(g: &Generators, omegas: &[OmegaSL], report: &mut Report) -> Result<()> {
    let s = Suite::OmegaSl;
    let model = g.model;
    for w in omegas {
        let name = g.slot_name(w);
        let at = &model.layers.layers[w.layer].name;
        report.push(
            s,
            format!("{name} at {at} is unique and integral"),
            w.kernel == 0 && w.integral,
            format!("{} conditions, kernel {}, integral {}", w.conditions, w.kernel, w.integral),
        );
    }
    let unit = omegas.iter().find(|w| w.set.is_empty()).ok_or_else(|| Error::Check("no slot for the unit".into()))?;
    report.push(s, "ω_{∅,T} is the unit", unit.class == g.sal.unit()?, "");
    let bad: Vec<String> =
        omegas.iter().filter(|w| w.set.len() == 1 && w.class != g.omega(w.set[0])).map(|w| g.slot_name(w)).collect();
    report.push(s, "ω_{{H},H} is ω_H", bad.is_empty(), bad.join(", "));

    // Averaging over the stabilizer inside the arrangement of S alone.
    let d = g.dim();
    let mut sets: Vec<&Vec<usize>> = omegas.iter().filter(|w| w.set.len() == d && d > 0).map(|w| &w.set).collect();
    sets.sort();
    sets.dedup();
    for set in sets {
        let (sub_model, _, _) = model.deletion(set)?;
        let sg = Generators::new(&sub_model, Choices::resolve(&sub_model, &ChoiceSet::default())?)?;
        let s_sub: Vec<usize> = (0..sub_model.arrangement.len()).collect();
        let group = sub_model.stabilizer(&s_sub);
        let translations = group
            .elements
            .iter()
            .map(|t| Ok(sub_model.translation(t)?.functor.simplex_map(&sg.sal.nerve, &sg.sal.nerve, d)))
            .collect::<Result<Vec<_>>>()?;
        let omega_s = sg.omega_product(&s_sub)?;
        for w in omegas.iter().filter(|w| &w.set == set) {
            let base = &model.layers.layers[w.layer].base;
            let l = sub_model.layers.layer_of_point(&sub_model.arrangement, base);
            let local = sg.omega_sl(l, &s_sub)?;
            let mut sum = vec![Q::zero(); local.class.len()];
            for simplex in &translations {
                for (a, b) in sum.iter_mut().zip(&sg.sal.restrict(&sg.sal, simplex, d, &local.class)?) {
                    *a += b;
                }
            }
            report.push(
                s,
                format!("{} averages to ω_S over G_S", g.slot_name(w)),
                sum == omega_s,
                format!("|G_S| = {}; sum {} vs ω_S {}", group.elements.len(), show(&sum), show(&omega_s)),
            );
        }
    }
    Ok(())
}

fn injectivity(g: &Generators, report: &mut Report) -> Result<()> {
    let s = Suite::Injectivity;
    for k in 0..=g.dim() {
        let b = g.sal.betti(k);
        let rows: Vec<Vec<Q>> = g.locals.iter().flat_map(|lb| g.pieces[lb.piece].restriction[k].iter().cloned()).collect();
        let (rank, _) = smith_summary(&rows, b)?;
        report.push(s, format!("⊕ φ_L is injective in degree {k}"), rank == b, format!("rank {rank} of {b}"));
    }
    Ok(())
}

fn generation(g: &Generators, omegas: &[OmegaSL], report: &mut Report) -> Result<()> {
    let s = Suite::Generation;
    let d = g.dim();
    let torus = Torus::new(g)?;
    let torus_classes = (0..=d).map(|j| torus.classes(g, j)).collect::<Result<Vec<_>>>()?;
    for k in 0..=d {
        let b = g.sal.betti(k);
        let mut cols = Vec::new();
        for w in omegas.iter().filter(|w| w.set.len() <= k) {
            let r = w.set.len();
            for t in &torus_classes[k - r] {
                cols.push(g.sal.cup(k - r, t, r, &w.class)?);
            }
        }
        let rows: Vec<Vec<Q>> = (0..b).map(|i| cols.iter().map(|c| c[i].clone()).collect()).collect();
        let (rank, unimodular) = smith_summary(&rows, cols.len())?;
        report.push(
            s,
            format!("ω_(S,L) · H^*(T) spans H^{k} over Z"),
            rank == b && unimodular,
            format!("{} products, rank {rank} of {b}, unimodular {unimodular}", cols.len()),
        );
    }
    // Locally: the nbc monomials of A[L] times torus classes span the piece over Z.
    for lb in &g.locals {
        let piece = &g.pieces[lb.piece];
        let mut ok = true;
        let mut detail = Vec::new();
        for k in 0..=d {
            let b = piece.space.betti(k);
            let mut cols = Vec::new();
            for (size, level) in lb.nbc.iter().enumerate().filter(|(size, _)| *size <= k) {
                for set in level {
                    let omega_s = g.omega_product(set)?;
                    for t in &torus_classes[k - size] {
                        cols.push(piece.restrict(k, &g.sal.cup(k - size, t, size, &omega_s)?));
                    }
                }
            }
            let rows: Vec<Vec<Q>> = (0..b).map(|i| cols.iter().map(|c| c[i].clone()).collect()).collect();
            let (rank, unimodular) = smith_summary(&rows, cols.len())?;
            ok &= rank == b && unimodular;
            detail.push(format!("H^{k}: rank {rank} of {b}"));
        }
        let name = &g.model.layers.layers[lb.layer].name;
        report.push(s, format!("{name}: ω_S · H^*(T) span the local cohomology"), ok, detail.join(", "));
    }
    Ok(())
}

/// A chamber whose closure meets every flat `X_L` in full dimension.
pub fn coherent_chamber(model: &ToricModel) -> Option<usize> {
    let fp = &model.linear.faces;
    let mut cs = fp.chambers();
    cs.sort_by(|a, b| fp.sign(*a).cmp(fp.sign(*b)));
    cs.into_iter().find(|&c| {
        (0..model.layers.len()).all(|l| {
            let zero = model.x_layer(l);
            let mut trace = fp.sign(c).clone();
            for &z in &zero {
                trace[z] = 0;
            }
            fp.index_of(&trace).is_some_and(|f| zero_set(fp.sign(f)) == zero)
        })
    })
}

fn coherence(model: &ToricModel, report: &mut Report) -> Result<()> {
    let s = Suite::Coherence;
    let Some(b) = coherent_chamber(model) else {
        report.inapplicable(s, "hypothesis", "no chamber meets every flat of a layer in full dimension");
        return Ok(());
    };
    let fp = &model.linear.faces;
    let mut set = ChoiceSet::default();
    for layer in &model.layers.layers {
        set.b.insert(layer.name.clone(), format_sign(fp.sign(b)));
    }
    let g = Generators::new(model, Choices::resolve(model, &set)?)?;
    report.push(s, "hypothesis", true, format!("B = {}", format_sign(fp.sign(b))));
    let d = g.dim();
    let layers = &model.layers;
    let mut checked = 0;
    let mut bad = Vec::new();
    for (l, layer) in layers.layers.iter().enumerate() {
        let lb = &g.locals[l];
        let wl = lb.n.iter().map(|&n| Ok(to_q(&g.winding(n)?))).collect::<Result<Vec<_>>>()?;
        for q in 0..layer.rank {
            let uppers: Vec<usize> = (0..layers.len()).filter(|&u| layers.layers[u].rank == q && layers.leq(u, l)).collect();
            for k in q..=d {
                for x in 0..g.sal.betti(k) {
                    let x = unit_vector(g.sal.betti(k), x);
                    let here = g.restrict_to_layer(l, k, &x);
                    let mut lhs = vec![Q::zero(); here.len()];
                    for (i, m) in lb.monomials[k].iter().enumerate() {
                        if m.omegas.len() == q {
                            lhs[i] = here[i].clone();
                        }
                    }
                    let mut rhs = vec![Q::zero(); here.len()];
                    for &u in &uppers {
                        let ub = &g.locals[u];
                        // Column j of `r` writes w(N_j(L)) in the windings of the N_h(L').
                        let wu = ub.n.iter().map(|&n| Ok(to_q(&g.winding(n)?))).collect::<Result<Vec<_>>>()?;
                        let cols: Vec<Vec<Q>> = (0..d).map(|row| wu.iter().map(|w| w[row].clone()).collect()).collect();
                        let r = wl
                            .iter()
                            .map(|w| solve_q(&cols, w, wu.len()).ok_or_else(|| Error::Check("a circle of L leaves L'".into())))
                            .collect::<Result<Vec<_>>>()?;
                        let there = g.restrict_to_layer(u, k, &x);
                        for (m, c) in ub.monomials[k].iter().zip(&there) {
                            if m.omegas.len() != q || c.is_zero() {
                                continue;
                            }
                            for (i, target) in lb.monomials[k].iter().enumerate() {
                                if target.omegas != m.omegas || target.lambdas.len() != m.lambdas.len() {
                                    continue;
                                }
                                // λ^{N_h(L')} ↦ Σ_j r[j][h] λ^{N_j(L)}; products pick up minors.
                                let minor: Vec<Vec<Q>> =
                                    target.lambdas.iter().map(|&j| m.lambdas.iter().map(|&h| r[j][h].clone()).collect()).collect();
                                rhs[i] += c * det_q(&minor);
                            }
                        }
                    }
                    checked += 1;
                    if lhs != rhs {
                        bad.push(format!("{} q={q} k={k}: {} vs {}", layer.name, show(&lhs), show(&rhs)));
                    }
                }
            }
        }
    }
    report.push(s, "the Brieskorn square commutes", bad.is_empty(), format!("{checked} comparisons; {}", bad.join("; ")));
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::super::tests::{example_model, table_choices};
    use super::*;

    #[test]
    fn every_suite_passes_on_the_example() {
        let model = example_model();
        let report = run(&model, &table_choices(), &Suite::ALL).unwrap();
        let failed: Vec<&Check> = report.checks.iter().filter(|c| c.status == Status::Fail).collect();
        assert!(failed.is_empty(), "{failed:#?}");
        assert_eq!(report.find(Suite::Coherence, "hypothesis").unwrap().status, Status::Inapplicable);
        assert!(report.of_suite(Suite::Chains).count() >= 5);
    }

    #[test]
    fn coherence_holds_on_two_coordinate_circles() {
        let model = example_model();
        let boolean = ToricModel::new(model.arrangement.sub(&[0, 2]).unwrap()).unwrap();
        assert!(coherent_chamber(&boolean).is_some());
        let report = run(&boolean, &ChoiceSet::default(), &[Suite::Coherence]).unwrap();
        print!("{}", report.to_tsv());
        assert!(report.passed());
        assert_eq!(report.checks.len(), 2);
    }

    #[test]
    fn suite_names_round_trip() {
        for s in Suite::ALL {
            assert_eq!(s.to_string().parse::<Suite>().unwrap(), s);
        }
        assert!("nope".parse::<Suite>().is_err());
    }
}
