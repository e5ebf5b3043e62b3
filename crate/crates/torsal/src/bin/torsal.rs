use std::fmt::Write as _;
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};
use serde::Serialize;
use serde_json::{json, Value};

use torsal::generators::{compare_tables, subsets, verify, ChoiceSet, Choices, Generators, Report, Suite, Table};
use torsal::input::ArrangementSpec;
use torsal::lattice::Q;
use torsal::random::corpus;
use torsal::toric::ToricModel;
use torsal::Error;

#[derive(Parser)]
#[command(name = "torsal", version, about = "Salvetti complexes and integral cohomology generators of complexified toric arrangements")]
struct Cli {
    /// Arrangement document (JSON).
    #[arg(long, global = true)]
    input: Option<PathBuf>,
    /// Chamber choices (JSON); replaces the document's own choices.
    #[arg(long, global = true)]
    choices: Option<PathBuf>,
    #[arg(long, global = true, value_enum, default_value_t = Format::Tsv)]
    format: Format,
    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Format {
    Tsv,
    Json,
}

#[derive(Subcommand)]
enum Command {
    /// The layer poset.
    Layers,
    /// Cells of the compact torus and their attachments.
    Faces,
    /// Size of the Grothendieck construction and its nerve.
    Salvetti,
    /// Betti numbers and torsion of the complex and of every layer subcomplex.
    Betti,
    /// Restriction table of the generators.
    Generators {
        /// Reference table (TSV) to compare against, row by row up to sign.
        #[arg(long)]
        compare: Option<PathBuf>,
    },
    /// Restrictions of products of degree-one generators to one or all layers.
    Restrict {
        #[arg(long)]
        layer: Option<String>,
        #[arg(long, default_value_t = 1)]
        max_degree: usize,
    },
    /// The classes ω_{S,L}.
    OmegaSl,
    /// Run verification suites; exit code 1 if any check fails.
    Verify {
        /// Suite to run (repeatable); all when omitted.
        #[arg(long = "suite")]
        suites: Vec<String>,
        /// Also run the suites on this many random small arrangements.
        #[arg(long, default_value_t = 0)]
        random: usize,
        /// Seed for `--random`.
        #[arg(long, default_value_t = 0)]
        seed: u64,
    },
}

struct Output {
    tsv: String,
    json: Value,
    failed: bool,
}

fn read(path: &PathBuf) -> torsal::Result<String> {
    std::fs::read_to_string(path).map_err(|e| Error::Input(format!("{}: {e}", path.display())))
}

fn load(cli: &Cli) -> torsal::Result<(ToricModel, ChoiceSet)> {
    let path = cli.input.as_ref().ok_or_else(|| Error::Input("--input is required".into()))?;
    let spec = ArrangementSpec::parse(&read(path)?).map_err(|e| Error::Input(format!("{}: {e}", path.display())))?;
    let choices = match &cli.choices {
        Some(p) => serde_json::from_str(&read(p)?).map_err(|e| Error::Input(format!("{}: {e}", p.display())))?,
        None => spec.choices.clone().unwrap_or_default(),
    };
    Ok((ToricModel::new(spec.arrangement()?)?, choices))
}

fn q_str(x: &Q) -> String {
    x.to_string()
}

fn point(p: &[Q]) -> String {
    format!("({})", p.iter().map(q_str).collect::<Vec<_>>().join(","))
}

fn names(model: &ToricModel, hs: &[usize]) -> Vec<String> {
    hs.iter().map(|&h| model.arrangement.hypertori[h].name.clone()).collect()
}

fn layers(model: &ToricModel) -> Output {
    let mut tsv = String::from("name\trank\tbase\tdirection\thypertori\n");
    let mut rows = Vec::new();
    for l in &model.layers.layers {
        let dir: Vec<String> = l.direction.iter().map(|v| format!("({})", v.iter().map(|x| x.to_string()).collect::<Vec<_>>().join(","))).collect();
        let hs = names(model, &l.hypertori);
        let _ = writeln!(tsv, "{}\t{}\t{}\t{}\t{}", l.name, l.rank, point(&l.base), dir.join(" "), hs.join(","));
        rows.push(json!({"name": l.name, "rank": l.rank, "base": l.base.iter().map(q_str).collect::<Vec<_>>(), "direction": dir, "hypertori": hs}));
    }
    Output { tsv, json: json!({"layers": rows}), failed: false }
}

fn faces(model: &ToricModel) -> Output {
    let fc = &model.faces;
    let mut tsv = String::from("face\tdim\tsupport\tbarycenter\thypertori\tattached_to\n");
    let mut rows = Vec::new();
    for (i, f) in fc.faces.iter().enumerate() {
        let mut targets: Vec<usize> = fc.from(i).into_iter().filter(|&m| !fc.is_identity(m)).map(|m| fc.morphisms[m].tgt).collect();
        targets.sort_unstable();
        let support = &model.layers.layers[f.support].name;
        let hs = names(model, &f.hypertori);
        let t: Vec<String> = targets.iter().map(|t| t.to_string()).collect();
        let _ = writeln!(tsv, "{i}\t{}\t{support}\t{}\t{}\t{}", f.dim, point(&f.barycenter), hs.join(","), t.join(","));
        rows.push(json!({"face": i, "dim": f.dim, "support": support, "barycenter": f.barycenter.iter().map(q_str).collect::<Vec<_>>(), "hypertori": hs, "attached_to": targets}));
    }
    Output { tsv, json: json!({"cell_counts": fc.cell_counts(), "faces": rows}), failed: false }
}

fn salvetti(model: &ToricModel) -> torsal::Result<Output> {
    let d = model.arrangement.dim;
    let space = torsal::cohomology::Space::new(model.salvetti.category.clone(), d)?;
    let simplices: Vec<usize> = (0..=d + 1).map(|k| space.cells(k)).collect();
    let mut tsv = String::from("quantity\tvalue\n");
    let _ = writeln!(tsv, "objects\t{}", model.salvetti.len());
    let _ = writeln!(tsv, "morphisms\t{}", model.salvetti.morphisms.len());
    for (k, n) in simplices.iter().enumerate() {
        let _ = writeln!(tsv, "simplices_{k}\t{n}");
    }
    Ok(Output {
        tsv,
        json: json!({"objects": model.salvetti.len(), "morphisms": model.salvetti.morphisms.len(), "simplices": simplices}),
        failed: false,
    })
}

fn generators<'a>(model: &'a ToricModel, set: &ChoiceSet) -> torsal::Result<Generators<'a>> {
    Generators::new(model, Choices::resolve(model, set)?)
}

fn torsion(space: &torsal::cohomology::Space, top: usize) -> Vec<Vec<String>> {
    (0..=top)
        .map(|k| space.homology.groups.get(k).map_or(Vec::new(), |g| g.torsion.iter().map(|t| t.to_string()).collect()))
        .collect()
}

fn betti(model: &ToricModel, set: &ChoiceSet) -> torsal::Result<Output> {
    let g = generators(model, set)?;
    let d = g.dim();
    let mut tsv = String::from("complex\tbetti\ttorsion\n");
    let mut rows = Vec::new();
    let mut emit = |name: String, space: &torsal::cohomology::Space| {
        let b = space.bettis(d);
        let t = torsion(space, d);
        let tor = if t.iter().all(Vec::is_empty) { "none".to_string() } else { format!("{t:?}") };
        let _ = writeln!(tsv, "{name}\t{}\t{tor}", b.iter().map(|x| x.to_string()).collect::<Vec<_>>().join(","));
        rows.push(json!({"complex": name, "betti": b, "torsion": t}));
    };
    emit("Sal".into(), &g.sal);
    for lb in &g.locals {
        emit(format!("S_{}", model.layers.layers[lb.layer].name), &g.pieces[lb.piece].space);
    }
    Ok(Output { tsv, json: json!({"complexes": rows}), failed: false })
}

fn table(model: &ToricModel, set: &ChoiceSet, compare: Option<&PathBuf>) -> torsal::Result<Output> {
    let g = generators(model, set)?;
    let omegas = g.all_omega_sl()?;
    let t = g.table(&omegas);
    let mut tsv = t.to_tsv();
    let mut json = json!({"table": t, "choices": g.choices.to_set(model)});
    if let Some(path) = compare {
        let reference = Table::parse_tsv(&read(path)?)?;
        let cmp = compare_tables(&t, &reference, &g.order_ranks())?;
        let _ = writeln!(tsv, "\n# comparison with {}: {}", path.display(), if cmp.agrees() { "agrees" } else { "differs" });
        for m in &cmp.mismatches {
            let _ = writeln!(tsv, "# {} at {}: computed {} printed {}", m.row, m.column, m.ours, m.reference);
        }
        for r in &cmp.missing_rows {
            let _ = writeln!(tsv, "# row {r} is printed but not computed");
        }
        for r in &cmp.extra_rows {
            let _ = writeln!(tsv, "# row {r} is computed but not printed");
        }
        json["comparison"] = serde_json::to_value(&cmp)?;
    }
    Ok(Output { tsv, json, failed: false })
}

fn restrict(model: &ToricModel, set: &ChoiceSet, layer: Option<&str>, max_degree: usize) -> torsal::Result<Output> {
    let g = generators(model, set)?;
    let d = g.dim();
    let targets: Vec<usize> = match layer {
        Some(name) => vec![model.layers.by_name(name).ok_or_else(|| Error::Input(format!("unknown layer {name}")))?],
        None => (0..model.layers.len()).collect(),
    };
    let mut gens: Vec<(String, Vec<Q>)> =
        g.base.iter().enumerate().map(|(i, &m)| (format!("lambda^{}", model.layers.layers[m].name), g.lambda(i).to_vec())).collect();
    gens.extend((0..model.arrangement.len()).map(|h| (format!("omega_{}", model.arrangement.hypertori[h].name), g.omega(h).to_vec())));
    let mut tsv = String::from("class");
    for &l in &targets {
        let _ = write!(tsv, "\tS_{}", model.layers.layers[l].name);
    }
    tsv.push('\n');
    let mut rows = Vec::new();
    for k in 1..=max_degree.min(d) {
        for idx in subsets(gens.len(), k) {
            let x = g.sal.product(&idx.iter().map(|&i| gens[i].1.clone()).collect::<Vec<_>>())?;
            if x.iter().all(|v| v == &Q::from_integer(0.into())) {
                continue;
            }
            let name = idx.iter().map(|&i| gens[i].0.as_str()).collect::<Vec<_>>().join(".");
            let cells: Vec<String> = targets.iter().map(|&l| g.cell(l, k, &x)).collect();
            let _ = writeln!(tsv, "{name}\t{}", cells.join("\t"));
            rows.push(json!({"class": name, "cells": cells}));
        }
    }
    let columns: Vec<String> = targets.iter().map(|&l| format!("S_{}", model.layers.layers[l].name)).collect();
    Ok(Output { tsv, json: json!({"columns": columns, "rows": rows}), failed: false })
}

fn omega_sl(model: &ToricModel, set: &ChoiceSet) -> torsal::Result<Output> {
    let g = generators(model, set)?;
    let mut tsv = String::from("slot\tlayer\tS\tconditions\tkernel\tintegral\tclass\n");
    let mut rows = Vec::new();
    for w in g.all_omega_sl()? {
        let layer = &model.layers.layers[w.layer].name;
        let s = names(model, &w.set);
        let class: Vec<String> = w.class.iter().map(q_str).collect();
        let _ = writeln!(tsv, "{}\t{layer}\t{}\t{}\t{}\t{}\t{}", g.slot_name(&w), s.join(","), w.conditions, w.kernel, w.integral, class.join(","));
        rows.push(json!({"slot": g.slot_name(&w), "layer": layer, "S": s, "conditions": w.conditions, "kernel": w.kernel, "integral": w.integral, "class": class}));
    }
    Ok(Output { tsv, json: json!({"omega_sl": rows}), failed: false })
}

#[derive(Serialize)]
struct Labelled<'a> {
    arrangement: String,
    report: &'a Report,
}

fn run_verify(cli: &Cli, suites: &[String], random: usize, seed: u64) -> torsal::Result<Output> {
    let suites: Vec<Suite> = if suites.is_empty() || suites.iter().any(|s| s == "all") {
        Suite::ALL.to_vec()
    } else {
        suites.iter().map(|s| s.parse()).collect::<torsal::Result<_>>()?
    };
    let mut reports: Vec<(String, Report)> = Vec::new();
    if cli.input.is_some() {
        let (model, set) = load(cli)?;
        reports.push(("input".into(), verify(&model, &set, &suites)?));
    } else if random == 0 {
        return Err(Error::Input("--input is required unless --random is given".into()));
    }
    for (i, arr) in corpus(seed, random, 4).into_iter().enumerate() {
        let desc: Vec<String> = arr
            .hypertori
            .iter()
            .map(|h| format!("[{}]={}", h.chi.iter().map(|x| x.to_string()).collect::<Vec<_>>().join(","), h.offset))
            .collect();
        let model = ToricModel::new(arr)?;
        reports.push((format!("random{i} {}", desc.join(" ")), verify(&model, &ChoiceSet::default(), &suites)?));
    }
    let mut tsv = String::from("arrangement\tsuite\tcheck\tstatus\tdetail\n");
    for (name, r) in &reports {
        for line in r.to_tsv().lines().skip(1) {
            let _ = writeln!(tsv, "{name}\t{line}");
        }
    }
    let failed = reports.iter().any(|(_, r)| !r.passed());
    let json = serde_json::to_value(reports.iter().map(|(a, r)| Labelled { arrangement: a.clone(), report: r }).collect::<Vec<_>>())?;
    Ok(Output { tsv, json, failed })
}

fn execute(cli: &Cli) -> torsal::Result<Output> {
    if let Command::Verify { suites, random, seed } = &cli.command {
        return run_verify(cli, suites, *random, *seed);
    }
    let (model, set) = load(cli)?;
    match &cli.command {
        Command::Layers => Ok(layers(&model)),
        Command::Faces => Ok(faces(&model)),
        Command::Salvetti => salvetti(&model),
        Command::Betti => betti(&model, &set),
        Command::Generators { compare } => table(&model, &set, compare.as_ref()),
        Command::Restrict { layer, max_degree } => restrict(&model, &set, layer.as_deref(), *max_degree),
        Command::OmegaSl => omega_sl(&model, &set),
        Command::Verify { .. } => unreachable!(),
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    if let Some(n) = std::env::var("TORSAL_THREADS").ok().and_then(|v| v.parse::<usize>().ok()) {
        // Fails only if a pool already exists, which cannot happen this early.
        let _ = rayon::ThreadPoolBuilder::new().num_threads(n.max(1)).build_global();
    }
    match execute(&cli) {
        Ok(out) => {
            match cli.format {
                Format::Tsv => print!("{}", out.tsv),
                Format::Json => println!("{}", serde_json::to_string_pretty(&out.json).expect("values serialize")),
            }
            if out.failed {
                ExitCode::from(1)
            } else {
                ExitCode::SUCCESS
            }
        }
        Err(e) => {
            eprintln!("torsal: {e}");
            match e {
                Error::Check(_) | Error::Overflow => ExitCode::from(1),
                _ => ExitCode::from(2),
            }
        }
    }
}
