//! Acceptance criteria 1–12 on the worked example, the boolean
//! sub-arrangement and a seeded random corpus. Prints one line per criterion.

use std::collections::{BTreeMap, BTreeSet};
use std::process::ExitCode;
use std::time::Instant;

use num_bigint::BigInt;
use num_traits::Signed;

use torsal::cohomology::Space;
use torsal::generators::{
    compare_tables, parse_cell, subsets, verify, ChoiceSet, Choices, Generators, Report, Status, Suite,
};
use torsal::input::ArrangementSpec;
use torsal::lattice::Q;
use torsal::random::corpus;
use torsal::toric::ToricModel;

const EXAMPLE: &str = include_str!("../data/example.json");
const BOOLEAN: &str = include_str!("../data/boolean.json");
const REFERENCE: &str = include_str!("../data/table1.tsv");
const CORPUS_SEED: u64 = 1;
const CORPUS_SIZE: usize = 10;

/// Cells where the computed table and the printed one differ, as
/// (row, column, computed, printed), plus rows present on one side only.
const KNOWN_MISMATCHES: [(&str, &str, &str, &str); 2] = [
    ("lambda^H0", "S_H1", "-1*lambda^H1", "1*lambda^H1"),
    ("omega_H1", "S_H2", "1*lambda^H2", "2*lambda^H2"),
];
const KNOWN_MISSING_ROWS: [&str; 1] = ["omega_{H1,H2}@Q"];
const KNOWN_EXTRA_ROWS: [&str; 1] = ["omega_{H0,H1}@Q"];

type Outcome = Result<String, String>;

fn load(text: &str) -> (ToricModel, ChoiceSet) {
    let spec = ArrangementSpec::parse(text).expect("bundled document parses");
    let model = ToricModel::new(spec.arrangement().expect("bundled arrangement is valid")).expect("model builds");
    (model, spec.choices.unwrap_or_default())
}

fn ensure(ok: bool, msg: impl Into<String>) -> Result<(), String> {
    if ok {
        Ok(())
    } else {
        Err(msg.into())
    }
}

fn check_passes(report: &Report, suite: Suite, name: &str) -> Result<String, String> {
    let c = report.find(suite, name).ok_or_else(|| format!("{suite}: no check named {name:?}"))?;
    match c.status {
        Status::Pass => Ok(c.detail.clone()),
        _ => Err(format!("{suite}: {name}: {} {}", c.status, c.detail)),
    }
}

fn suite_passes(report: &Report, suite: Suite) -> Result<usize, String> {
    let checks: Vec<_> = report.of_suite(suite).collect();
    ensure(!checks.is_empty(), format!("{suite} ran no checks"))?;
    let failed: Vec<String> = checks.iter().filter(|c| c.status == Status::Fail).map(|c| format!("{} ({})", c.name, c.detail)).collect();
    ensure(failed.is_empty(), format!("{suite}: {}", failed.join("; ")))?;
    Ok(checks.iter().filter(|c| c.status == Status::Pass).count())
}

/// Betti numbers from the Möbius function of the layer poset:
/// `Σ_L |μ(T, L)| t^{rk L} (1 + t)^{dim L}`.
fn mobius_betti(model: &ToricModel) -> Vec<usize> {
    let layers = &model.layers;
    let d = model.arrangement.dim;
    let mut order: Vec<usize> = (0..layers.len()).collect();
    order.sort_by_key(|&l| layers.layers[l].rank);
    let mut mu = vec![0i64; layers.len()];
    for &l in &order {
        mu[l] = if layers.layers[l].rank == 0 {
            1
        } else {
            -order.iter().filter(|&&k| k != l && layers.leq(k, l)).map(|&k| mu[k]).sum::<i64>()
        };
    }
    let mut betti = vec![0usize; d + 1];
    for (l, layer) in layers.layers.iter().enumerate() {
        let free = d - layer.rank;
        for j in 0..=free {
            betti[layer.rank + j] += mu[l].unsigned_abs() as usize * binomial(free, j);
        }
    }
    betti
}

fn binomial(n: usize, k: usize) -> usize {
    (0..k).fold(1, |acc, i| acc * (n - i) / (i + 1))
}

fn det2(a: &[BigInt], b: &[BigInt]) -> BigInt {
    &a[0] * &b[1] - &a[1] * &b[0]
}

fn criterion_1(model: &ToricModel) -> Outcome {
    let layers = &model.layers.layers;
    let got: BTreeMap<&str, usize> = layers.iter().map(|l| (l.name.as_str(), l.rank)).collect();
    let want: BTreeMap<&str, usize> = [("T", 0), ("H0", 1), ("H1", 1), ("H2", 1), ("P", 2), ("Q", 2)].into_iter().collect();
    ensure(got == want, format!("layers {got:?}"))?;
    // Each pair of independent hypertori meets in |det| points; every point
    // layer absorbs C(k, 2) of those pair intersections.
    let hs = &model.arrangement.hypertori;
    let pairs: BigInt = subsets(hs.len(), 2).iter().map(|p| det2(&hs[p[0]].chi, &hs[p[1]].chi).abs()).sum();
    let absorbed: usize = layers.iter().filter(|l| l.rank == 2).map(|l| binomial(l.hypertori.len(), 2)).sum();
    ensure(pairs == BigInt::from(absorbed), format!("{pairs} pair intersections but point layers absorb {absorbed}"))?;
    let through = |name: &str| {
        let l = &layers[model.layers.by_name(name).unwrap()];
        l.hypertori.iter().map(|&h| hs[h].name.as_str()).collect::<BTreeSet<_>>()
    };
    ensure(through("P") == BTreeSet::from(["H0", "H1", "H2"]), "P is not the triple point")?;
    ensure(through("Q") == BTreeSet::from(["H0", "H1"]), "Q does not lie on H0 and H1 only")?;
    Ok(format!("{want:?}; {pairs} pair intersections"))
}

fn criterion_2(model: &ToricModel, g: &Generators) -> Outcome {
    let snf = g.sal.bettis(2);
    let mobius = mobius_betti(model);
    let b1_formula = model.arrangement.dim + model.arrangement.len();
    ensure(snf == mobius, format!("SNF {snf:?} vs Möbius {mobius:?}"))?;
    ensure(snf == vec![1, 5, 7], format!("Betti numbers {snf:?}"))?;
    ensure(snf[1] == b1_formula, format!("b1 = {} but rk T + |A| = {b1_formula}", snf[1]))?;
    Ok(format!("SNF {snf:?} = Möbius {mobius:?}"))
}

struct CorpusCase {
    desc: String,
    model: ToricModel,
}

fn build_corpus() -> Vec<CorpusCase> {
    corpus(CORPUS_SEED, CORPUS_SIZE, 4)
        .into_iter()
        .map(|arr| {
            let desc = arr
                .hypertori
                .iter()
                .map(|h| format!("[{}]={}", h.chi.iter().map(|x| x.to_string()).collect::<Vec<_>>().join(","), h.offset))
                .collect::<Vec<_>>()
                .join(" ");
            CorpusCase { desc, model: ToricModel::new(arr).expect("corpus arrangement builds") }
        })
        .collect()
}

fn criterion_3(g: &Generators, cases: &[CorpusCase]) -> Outcome {
    ensure(g.sal.is_torsion_free(), "the example has torsion")?;
    ensure(cases.len() >= 10, "corpus is smaller than 10")?;
    let allowed: Vec<Q> = [(0, 1), (1, 2), (1, 3)].iter().map(|&(n, d)| Q::new(n.into(), d.into())).collect();
    for c in cases {
        let arr = &c.model.arrangement;
        ensure(arr.dim <= 2 && arr.len() <= 4, format!("{} is outside the corpus bounds", c.desc))?;
        ensure(arr.hypertori.iter().all(|h| allowed.contains(&h.offset)), format!("{} has an offset outside {{0, 1/2, 1/3}}", c.desc))?;
        let space = Space::new(c.model.salvetti.category.clone(), arr.dim).map_err(|e| e.to_string())?;
        ensure(space.is_torsion_free(), format!("{} has torsion", c.desc))?;
        let (snf, mobius) = (space.bettis(arr.dim), mobius_betti(&c.model));
        ensure(snf == mobius, format!("{}: SNF {snf:?} vs Möbius {mobius:?}", c.desc))?;
    }
    Ok(format!("example and {} random arrangements", cases.len()))
}

fn criterion_4(model: &ToricModel, report: &Report) -> Outcome {
    let chambers = model.linear.faces.chambers().len();
    let one_dim = model.layers.layers.iter().filter(|l| l.rank == model.arrangement.dim - 1).count();
    let expected = one_dim * chambers * chambers;
    ensure(expected == 108, format!("{one_dim} layers × {chambers}² chambers"))?;
    let detail = check_passes(report, Suite::Chains, "basis change holds on chains")?;
    let pairs: usize = detail.split_whitespace().next().and_then(|n| n.parse().ok()).ok_or("no pair count")?;
    ensure(pairs == expected, format!("{pairs} pairs checked, expected {expected}"))?;
    check_passes(report, Suite::Chains, "basis change holds in homology")?;
    Ok(format!("{pairs} ordered pairs, chains and homology"))
}

fn criterion_5(g: &Generators, report: &Report) -> Outcome {
    check_passes(report, Suite::Homology, "global dual basis pairs to the identity")?;
    check_passes(report, Suite::Homology, "local dual bases pair to the identity")?;
    let size = g.sal.betti(1);
    ensure(size == 5, format!("global H^1 basis has {size} elements"))?;
    Ok(format!("global (size {size}) and {} local bases", g.locals.len()))
}

fn criterion_6(model: &ToricModel, g: &Generators, report: &Report) -> Outcome {
    for l in &model.layers.layers {
        check_passes(report, Suite::Restriction, &format!("{}: cochain restriction equals the closed formulas in degree one", l.name))?;
        check_passes(report, Suite::Restriction, &format!("{}: a_hi from windings match the global λ coordinates", l.name))?;
    }
    let h1 = model.layers.by_name("H1").ok_or("no layer H1")?;
    let pattern: Vec<Q> = (0..g.base.len())
        .map(|i| {
            let cell = parse_cell(&g.cell(h1, 1, g.lambda(i))).map_err(|e| e.to_string())?;
            ensure(cell.len() == 1, format!("λ row {i} at S_H1 is {cell:?}"))?;
            Ok(cell[0].1.abs())
        })
        .collect::<Result<_, String>>()?;
    let want = vec![Q::from_integer(1.into()), Q::from_integer(2.into())];
    ensure(pattern == want, format!("|coefficients| at H1 are {pattern:?}"))?;
    Ok(format!("{} layers; |a| at H1 = (1, 2)", model.layers.len()))
}

fn criterion_7(g: &Generators, report: &Report) -> Outcome {
    let omegas = g.all_omega_sl().map_err(|e| e.to_string())?;
    let d = g.dim();
    for w in &omegas {
        ensure(w.kernel == 0 && w.integral, format!("{} has kernel {} integral {}", g.slot_name(w), w.kernel, w.integral))?;
        check_passes(report, Suite::OmegaSl, &format!("{} at {} is unique and integral", g.slot_name(w), g.model.layers.layers[w.layer].name))?;
    }
    // Each slot contributes a free H^*(L)-module of rank 2^{dim L}; together
    // they account for the whole cohomology.
    let span: usize = omegas.iter().map(|w| 1usize << (d - g.model.layers.layers[w.layer].rank)).sum();
    let total: usize = g.sal.bettis(d).iter().sum();
    ensure(span == total, format!("slots span {span} but Σ b_k = {total}"))?;
    let table_rows = g.base.len() + omegas.iter().filter(|w| !w.set.is_empty()).count();
    ensure(table_rows == 8, format!("{table_rows} table rows"))?;
    Ok(format!("{} slots, {table_rows} table rows with the λ rows, Σ 2^dim L = {span} = Σ b_k", omegas.len()))
}

fn criterion_8(report: &Report) -> Outcome {
    let n = suite_passes(report, Suite::Injectivity)?;
    ensure(n == 3, format!("{n} degrees checked"))?;
    Ok("kernel rank 0 in degrees 0, 1, 2".into())
}

fn criterion_9(report: &Report) -> Outcome {
    for k in 0..=2 {
        check_passes(report, Suite::Generation, &format!("ω_(S,L) · H^*(T) spans H^{k} over Z"))?;
    }
    suite_passes(report, Suite::Generation)?;
    Ok("trivial cokernel in degrees 0, 1, 2".into())
}

/// Fails with the list of differences from the printed table; the caller
/// compares that list with the documented one.
fn criterion_10(g: &Generators) -> Result<Outcome, String> {
    let omegas = g.all_omega_sl().map_err(|e| e.to_string())?;
    let ours = g.table(&omegas);
    let reference = torsal::generators::Table::parse_tsv(REFERENCE).map_err(|e| e.to_string())?;
    let cmp = compare_tables(&ours, &reference, &g.order_ranks()).map_err(|e| e.to_string())?;
    let got: BTreeSet<(String, String, String, String)> =
        cmp.mismatches.iter().map(|m| (m.row.clone(), m.column.clone(), m.ours.clone(), m.reference.clone())).collect();
    let known: BTreeSet<(String, String, String, String)> =
        KNOWN_MISMATCHES.iter().map(|&(a, b, c, d)| (a.into(), b.into(), c.into(), d.into())).collect();
    let missing: BTreeSet<&str> = cmp.missing_rows.iter().map(String::as_str).collect();
    let extra: BTreeSet<&str> = cmp.extra_rows.iter().map(String::as_str).collect();
    if got != known || missing != BTreeSet::from(KNOWN_MISSING_ROWS) || extra != BTreeSet::from(KNOWN_EXTRA_ROWS) || !cmp.missing_columns.is_empty() {
        return Err(format!(
            "unexpected differences: cells {got:?}, printed-only rows {missing:?}, computed-only rows {extra:?}, missing columns {:?}",
            cmp.missing_columns
        ));
    }
    if cmp.agrees() {
        return Ok(Ok("matches the printed table".into()));
    }
    let mut lines: Vec<String> = got.iter().map(|(r, c, o, p)| format!("{r}|{c}: computed {o}, printed {p}")).collect();
    lines.extend(missing.iter().map(|r| format!("row {r} printed only")));
    lines.extend(extra.iter().map(|r| format!("row {r} computed only")));
    Ok(Err(lines.join("; ")))
}

fn criterion_11(example: &ToricModel) -> Outcome {
    let (boolean, _) = load(BOOLEAN);
    let r = verify(&boolean, &ChoiceSet::default(), &[Suite::Coherence]).map_err(|e| e.to_string())?;
    let checks: Vec<_> = r.of_suite(Suite::Coherence).collect();
    ensure(checks.iter().all(|c| c.status == Status::Pass), format!("boolean: {}", r.to_tsv()))?;
    ensure(checks.len() >= 2, "boolean: no commuting square was checked")?;
    let r = verify(example, &ChoiceSet::default(), &[Suite::Coherence]).map_err(|e| e.to_string())?;
    let c = r.find(Suite::Coherence, "hypothesis").ok_or("example: no hypothesis check")?;
    ensure(c.status == Status::Inapplicable, format!("example: hypothesis reported {}", c.status))?;
    ensure(r.checks.len() == 1, "example: coherence ran past an unmet hypothesis")?;
    Ok(format!("{} checks on the boolean case; inapplicable on the example", checks.len()))
}

fn criterion_12(model: &ToricModel, set: &ChoiceSet, cases: &[CorpusCase]) -> Outcome {
    let property_suites = [Suite::Chains, Suite::Homology, Suite::Restriction];
    let mut runs = 0;
    for s in Suite::ALL {
        let r = verify(model, set, &[s]).map_err(|e| e.to_string())?;
        ensure(r.checks.iter().all(|c| c.suite == s.to_string()), format!("{s} ran checks of other suites"))?;
        if s != Suite::Coherence {
            suite_passes(&r, s).map_err(|e| format!("example: {e}"))?;
        }
        runs += 1;
    }
    for c in cases {
        let space = Space::new(c.model.salvetti.category.clone(), c.model.arrangement.dim).map_err(|e| e.to_string())?;
        space.complex.check_d_squared().map_err(|e| format!("{}: {e}", c.desc))?;
        let r = verify(&c.model, &ChoiceSet::default(), &property_suites).map_err(|e| format!("{}: {e}", c.desc))?;
        for s in property_suites {
            suite_passes(&r, s).map_err(|e| format!("{}: {e}", c.desc))?;
        }
        runs += 1;
    }
    Ok(format!("{runs} runs: each suite alone on the example, chains/homology/restriction on {} random arrangements", cases.len()))
}

fn main() -> ExitCode {
    let start = Instant::now();
    let (model, set) = load(EXAMPLE);
    let choices = Choices::resolve(&model, &set).expect("bundled choices resolve");
    let g = Generators::new(&model, choices).expect("generators build");
    let report = verify(&model, &set, &Suite::ALL).expect("verification runs");
    let cases = build_corpus();

    let mut results: Vec<(usize, Outcome)> = vec![
        (1, criterion_1(&model)),
        (2, criterion_2(&model, &g)),
        (3, criterion_3(&g, &cases)),
        (4, criterion_4(&model, &report)),
        (5, criterion_5(&g, &report)),
        (6, criterion_6(&model, &g, &report)),
        (7, criterion_7(&g, &report)),
        (8, criterion_8(&report)),
        (9, criterion_9(&report)),
    ];
    let tenth = criterion_10(&g);
    let tenth_as_documented = tenth.is_ok();
    results.push((10, tenth.unwrap_or_else(Err)));
    results.push((11, criterion_11(&model)));
    results.push((12, criterion_12(&model, &set, &cases)));

    for (n, r) in &results {
        match r {
            Ok(msg) => println!("criterion {n:>2}: PASS  {msg}"),
            Err(msg) => println!("criterion {n:>2}: FAIL  {msg}"),
        }
    }
    println!("acceptance finished in {:.1?}", start.elapsed());

    // Criterion 10 differs from the printed table in a documented, fixed set
    // of cells; any other failure, or a change in that set, fails the target.
    let unexpected: Vec<usize> = results.iter().filter(|(n, r)| r.is_err() && *n != 10).map(|(n, _)| *n).collect();
    if !unexpected.is_empty() || !tenth_as_documented {
        eprintln!("acceptance: unexpected failures in criteria {unexpected:?}; criterion 10 as documented: {tenth_as_documented}");
        return ExitCode::FAILURE;
    }
    ExitCode::SUCCESS
}

