//! Subcommand implementations. Each builder turns loaded datasets into
//! tables and summaries; `run` decides where they go.

use std::collections::{BTreeMap, BTreeSet};

use anyhow::{bail, ensure, Context, Result};
use serde::Serialize;
use serde_json::json;

use revpref::dataset::{check_symmetry, generate_menu_collection, parse_csv_path, write_csv, Dataset, MenuCollection};
use revpref::dot::to_dot;
use revpref::exec::{configure_threads, Execution};
use revpref::metrics::{
    adjusted_choice_size_frequencies, choice_size_counts, randomization_screen, satisficing_flags, subject_metrics,
    two_stage, ListOrderStats, SatisficingCutoffs, ScreenCutoffs,
};
use revpref::models::{best_of, ModelKind, ScoreResult, Scorer};
use revpref::relation::{catalog, BinaryRelation, RelationClass};
use revpref::report::cohort_table;
use revpref::revealed::{
    check_axiom_capped, rationalize_dominant, rationalize_undominated, richter_rationalize, Axiom, AxiomReport,
    Rationalization,
};
use revpref::separation::{has_indifference, separate_dominant, separate_eliaz_ok, PairClassification, PairStatus};
use revpref::simulation::{calibrate_scores, calibrate_screens, simulate_uniform, SimConfig, GENERATOR_ID};

use crate::output::{file_stem, json as to_json, write_file, Cell, Emitter, Table};
use crate::{
    Cli, Command, EnumerateArgs, Global, GraphArgs, MetricsArgs, RecoverArgs, ReportArgs, SeparationMethod, SimulateArgs,
    SummaryArgs,
};

pub fn run(cli: Cli) -> Result<()> {
    let g = &cli.global;
    let exec = execution(g);
    let out = Emitter::new(g.out.as_deref());
    match &cli.command {
        Command::Validate => out.emit(&to_json(&validation(&load(g)?))?),
        Command::Enumerate(args) => out.emit(&enumerate(args)?.render(g.format)?),
        Command::Score(args) => {
            let data = load(g)?;
            let kinds = models(g)?;
            let results = Scorer::new(exec).score_all(&data, &kinds)?;
            out.emit(&score_table(&data, &kinds, &results).render(g.format)?)?;
            summary(args, &score_summary(&kinds, &results, g.threshold)?)
        }
        Command::Recover(args) => out.emit(&recover(g, args, exec)?.render(g.format)?),
        Command::Axioms(args) => {
            let axioms = parse_axioms(&args.axiom)?;
            out.emit(&axiom_table(&load(g)?, &axioms, args.witness_cap, exec).render(g.format)?)
        }
        Command::Separate(args) => {
            let (table, sum) = separation(&load(g)?, args.method, exec)?;
            out.emit(&table.render(g.format)?)?;
            summary(&args.summary, &sum)
        }
        Command::Metrics(args) => {
            let data = load(g)?;
            let kinds = models(g)?;
            let (table, sum) = metrics(&data, &kinds, g, args, exec)?;
            out.emit(&table.render(g.format)?)?;
            summary(&args.summary, &sum)
        }
        Command::Simulate(args) => simulate(g, args, exec, &out),
        Command::Graph(args) => out.emit(&graph(g, args)?),
        Command::Report(args) => report(g, args, exec),
    }
}

fn execution(g: &Global) -> Execution {
    match g.jobs {
        Some(1) => Execution::Sequential,
        Some(jobs) => {
            configure_threads(jobs);
            Execution::default()
        }
        None => Execution::default(),
    }
}

/// Parses every input file; subject ids must be unique across files.
fn load(g: &Global) -> Result<Vec<Dataset>> {
    ensure!(!g.input.is_empty(), "no input file given (use --input)");
    let mut data = Vec::new();
    let mut seen = BTreeSet::new();
    for path in &g.input {
        let parsed = parse_csv_path(path, g.forced).with_context(|| format!("reading {}", path.display()))?;
        for d in parsed {
            ensure!(seen.insert(d.subject_id.clone()), "subject {:?} appears in more than one file", d.subject_id);
            data.push(d);
        }
    }
    if g.exclude_uninformative {
        data.retain(|d| !d.is_uninformative());
    }
    ensure!(!data.is_empty(), "input contains no subjects");
    Ok(data)
}

fn models(g: &Global) -> Result<Vec<ModelKind>> {
    let mut kinds: Vec<ModelKind> = Vec::new();
    for code in &g.models {
        let k = ModelKind::from_code(code)?;
        if !kinds.contains(&k) {
            kinds.push(k);
        }
    }
    ensure!(!kinds.is_empty(), "--models must name at least one model");
    Ok(kinds)
}

fn summary<T: Serialize>(args: &SummaryArgs, value: &T) -> Result<()> {
    let text = to_json(value)?;
    match &args.summary {
        Some(p) => write_file(p, &text),
        None => {
            eprint!("{text}");
            Ok(())
        }
    }
}

/// Single-line relation text: `n=4 reflexive: A~B A>C`.
fn relation_line(r: &BinaryRelation) -> String {
    let text = r.to_text();
    let mut lines = text.lines();
    let header = lines.next().unwrap_or_default().trim_start_matches('#').trim().to_string();
    let body: Vec<&str> = lines.collect();
    format!("{header}: {}", body.join(" "))
}

/// Menu collections in first-appearance order with their subjects.
fn menu_collections(data: &[Dataset]) -> Vec<(MenuCollection, Vec<&str>)> {
    let mut out: Vec<(MenuCollection, Vec<&str>)> = Vec::new();
    for d in data {
        let mc = MenuCollection::of_dataset(d);
        match out.iter_mut().find(|(m, _)| *m == mc) {
            Some((_, subjects)) => subjects.push(&d.subject_id),
            None => out.push((mc, vec![&d.subject_id])),
        }
    }
    out
}

fn validation(data: &[Dataset]) -> serde_json::Value {
    let collections: Vec<_> = menu_collections(data)
        .into_iter()
        .map(|(mc, subjects)| {
            json!({
                "alternatives": mc.n(),
                "menus": mc.len(),
                "symmetry": check_symmetry(&mc),
                "subjects": subjects.len(),
            })
        })
        .collect();
    let subjects: Vec<_> = data
        .iter()
        .map(|d| {
            json!({
                "subject": d.subject_id,
                "alternatives": d.n(),
                "observations": d.len(),
                "deferrals": d.deferral_count(),
                "choose_everything": d.choose_everything_count(),
                "uninformative": d.is_uninformative(),
            })
        })
        .collect();
    json!({
        "valid": true,
        "forced": data.iter().all(|d| d.forced),
        "subjects": data.len(),
        "observations": data.iter().map(Dataset::len).sum::<usize>(),
        "deferrals": data.iter().map(Dataset::deferral_count).sum::<usize>(),
        "uninformative": data.iter().filter(|d| d.is_uninformative()).count(),
        "menu_collections": collections,
        "per_subject": subjects,
    })
}

fn enumerate(args: &EnumerateArgs) -> Result<Table> {
    match (&args.class, args.list) {
        (Some(class), true) => {
            let class: RelationClass = class.parse()?;
            let mut t = Table::new(&["index", "relation"]);
            for (i, r) in catalog(class, args.n)?.iter().enumerate() {
                t.push(vec![i.into(), relation_line(r).into()]);
            }
            Ok(t)
        }
        (class, _) => {
            let classes = match class {
                Some(c) => vec![c.parse::<RelationClass>()?],
                None => RelationClass::ALL.to_vec(),
            };
            let mut t = Table::new(&["class", "n", "count"]);
            for c in classes {
                t.push(vec![c.name().into(), args.n.into(), catalog(c, args.n)?.len().into()]);
            }
            Ok(t)
        }
    }
}

fn score_table(data: &[Dataset], kinds: &[ModelKind], results: &[Vec<ScoreResult>]) -> Table {
    let mut columns: Vec<String> =
        ["subject", "uninformative", "best_model", "best_score", "optimal_relations", "tie_with_rc", "tied_with"]
            .map(String::from)
            .to_vec();
    for k in kinds {
        columns.push(format!("score_{}", k.code()));
        columns.push(format!("optimal_{}", k.code()));
    }
    let mut t = Table::new(&columns);
    for (d, row) in data.iter().zip(results) {
        let best = best_of(row).expect("at least one model");
        let mut cells: Vec<Cell> = vec![
            d.subject_id.as_str().into(),
            d.is_uninformative().into(),
            best.kind.code().into(),
            best.result.score.into(),
            best.result.optimal_relations.len().into(),
            best.tie_with_rc().into(),
            best.tied_with.iter().map(|k| k.code()).collect::<Vec<_>>().join(";").into(),
        ];
        for r in row {
            cells.push(r.score.into());
            cells.push(r.optimal_relations.len().into());
        }
        t.push(cells);
    }
    t
}

fn score_summary(kinds: &[ModelKind], results: &[Vec<ScoreResult>], threshold: u32) -> Result<serde_json::Value> {
    Ok(json!({
        "threshold": threshold,
        "models": kinds,
        "subjects": results.len(),
        "cohort": cohort_table(results, kinds, threshold),
    }))
}

fn recover(g: &Global, args: &RecoverArgs, exec: Execution) -> Result<Table> {
    let data = load(g)?;
    if args.rationalize {
        return rationalizations(&data, exec);
    }
    let kinds = models(g)?;
    let results = Scorer::new(exec).score_all(&data, &kinds)?;
    let mut t = Table::new(&["subject", "model", "score", "rank", "relation"]);
    for (d, row) in data.iter().zip(&results) {
        for r in row {
            for (i, rel) in r.optimal_relations.iter().enumerate() {
                t.push(vec![
                    d.subject_id.as_str().into(),
                    r.kind.code().into(),
                    r.score.into(),
                    (i + 1).into(),
                    relation_line(rel).into(),
                ]);
            }
        }
    }
    Ok(t)
}

fn failed_axioms(reports: &[AxiomReport]) -> String {
    reports.iter().filter(|r| !r.holds).map(|r| r.axiom.name()).collect::<Vec<_>>().join(";")
}

fn rationalizations(data: &[Dataset], exec: Execution) -> Result<Table> {
    let rows = exec.map_slice(data, |d| -> revpref::Result<Vec<Vec<Cell>>> {
        let mut rows = Vec::new();
        let mut push = |method: &str, outcome: Rationalization| {
            let (status, relation, failed) = match &outcome {
                Rationalization::Rationalized(r) => ("rationalized", relation_line(r), String::new()),
                Rationalization::Failed(reports) => ("failed", String::new(), failed_axioms(reports)),
            };
            rows.push(vec![
                d.subject_id.as_str().into(),
                method.into(),
                status.into(),
                relation.into(),
                failed.into(),
            ]);
        };
        push("dominant", rationalize_dominant(d)?);
        push("undominated", rationalize_undominated(d)?);
        let rational = match richter_rationalize(d)? {
            Some(r) => Rationalization::Rationalized(r),
            None => Rationalization::Failed(
                [Axiom::BehaviouralDecisiveness, Axiom::Congruence]
                    .into_iter()
                    .map(|a| check_axiom_capped(d, a, 0))
                    .collect(),
            ),
        };
        push("rational", rational);
        Ok(rows)
    });
    let mut t = Table::new(&["subject", "method", "status", "relation", "failed_axioms"]);
    for rows in rows {
        for row in rows? {
            t.push(row);
        }
    }
    Ok(t)
}

fn parse_axioms(names: &[String]) -> Result<Vec<Axiom>> {
    if names.is_empty() {
        return Ok(Axiom::ALL.to_vec());
    }
    names.iter().map(|n| Ok(n.parse::<Axiom>()?)).collect()
}

fn axiom_table(data: &[Dataset], axioms: &[Axiom], cap: usize, exec: Execution) -> Table {
    let cap = if cap == 0 { usize::MAX } else { cap };
    let reports = exec.map_slice(data, |d| axioms.iter().map(|&a| check_axiom_capped(d, a, cap)).collect::<Vec<_>>());
    let mut t = Table::new(&["subject", "axiom", "holds", "witnesses_shown", "truncated", "witnesses"]);
    for (d, reports) in data.iter().zip(reports) {
        for r in reports {
            t.push(vec![
                d.subject_id.as_str().into(),
                r.axiom.name().into(),
                r.holds.into(),
                r.witnesses.len().into(),
                r.truncated.into(),
                r.witnesses.iter().map(ToString::to_string).collect::<Vec<_>>().join(" ").into(),
            ]);
        }
    }
    t
}

#[derive(Serialize, Default)]
struct SeparationSummary {
    method: &'static str,
    subjects: usize,
    /// Subjects with at least one revealed indifference between distinct
    /// alternatives.
    with_indifference: usize,
    with_indecisiveness: usize,
    /// Eliaz–Ok only: subjects whose weak-preference interpretation is not
    /// regular, so the split is not a separation.
    not_separating: usize,
    pair_counts: BTreeMap<&'static str, usize>,
}

fn separation(data: &[Dataset], method: SeparationMethod, exec: Execution) -> Result<(Table, SeparationSummary)> {
    let per_subject = exec.map_slice(data, |d| -> revpref::Result<(Vec<PairClassification>, bool)> {
        match method {
            SeparationMethod::Dominant => Ok((separate_dominant(d)?, true)),
            SeparationMethod::EliazOk => {
                let uc = revpref::models::distance_score(d, ModelKind::UndominatedChoice)?;
                let r = uc.optimal_relations.first().ok_or(revpref::Error::NoAdmissibleRelations(d.n()))?;
                let report = separate_eliaz_ok(d, r)?;
                Ok((report.pairs, report.separating))
            }
        }
    });
    let name = match method {
        SeparationMethod::Dominant => "dominant",
        SeparationMethod::EliazOk => "eliaz-ok",
    };
    let mut sum = SeparationSummary { method: name, subjects: data.len(), ..Default::default() };
    let mut t = Table::new(&[
        "subject",
        "x",
        "y",
        "status",
        "criterion",
        "co_occurrences",
        "joint",
        "x_only",
        "y_only",
        "neither",
    ]);
    for (d, result) in data.iter().zip(per_subject) {
        let (pairs, separating) = result.with_context(|| format!("subject {}", d.subject_id))?;
        sum.with_indifference += usize::from(has_indifference(&pairs));
        sum.with_indecisiveness += usize::from(pairs.iter().any(|p| p.status == PairStatus::Indecisive));
        sum.not_separating += usize::from(!separating);
        for p in &pairs {
            *sum.pair_counts.entry(p.status.name()).or_default() += 1;
            t.push(vec![
                d.subject_id.as_str().into(),
                p.x.to_string().into(),
                p.y.to_string().into(),
                p.status.name().into(),
                p.criterion.name().into(),
                p.pattern.co_occurrences.into(),
                p.pattern.joint.into(),
                p.pattern.x_only.into(),
                p.pattern.y_only.into(),
                p.pattern.neither.into(),
            ]);
        }
    }
    Ok((t, sum))
}

fn screen_cutoffs(forced: bool, args: &MetricsArgs) -> ScreenCutoffs {
    let base = ScreenCutoffs::calibrated(forced);
    ScreenCutoffs {
        satisficing: SatisficingCutoffs {
            first_item: args.first_item_cutoff.unwrap_or(base.satisficing.first_item),
            position: args.position_cutoff.unwrap_or(base.satisficing.position),
        },
        choose_everything: args.choose_everything_cutoff.unwrap_or(base.choose_everything),
    }
}

fn metrics(
    data: &[Dataset],
    kinds: &[ModelKind],
    g: &Global,
    args: &MetricsArgs,
    exec: Execution,
) -> Result<(Table, serde_json::Value)> {
    let cutoffs = screen_cutoffs(g.forced, args);
    let require_unclassified = !args.no_two_stage;
    let results = Scorer::new(exec).scores_only().score_all(data, kinds)?;
    let rows = exec.map_slice(data, subject_metrics);
    let mut t = Table::new(&[
        "subject",
        "observations",
        "avg_choice_proportion",
        "avg_choice_proportion_active",
        "deferrals",
        "active",
        "choose_everything",
        "first_item_only_frequency",
        "avg_chosen_position",
        "order_recorded",
        "best_model",
        "best_score",
        "classified",
        "satisficing_flag",
        "randomization_flag",
    ]);
    let (mut satisficing, mut randomizing) = (0usize, 0usize);
    for ((d, m), scores) in data.iter().zip(rows).zip(&results) {
        let m = m.with_context(|| format!("subject {}", d.subject_id))?;
        let best = best_of(scores).expect("at least one model");
        let stats = ListOrderStats {
            first_item_only_frequency: m.first_item_only_frequency,
            avg_chosen_position: m.avg_chosen_position,
        };
        let sat = satisficing_flags(stats, cutoffs.satisficing).any();
        let sat = two_stage(sat, best.result.score, g.threshold, require_unclassified);
        let rnd = randomization_screen(d, cutoffs.choose_everything).flag;
        let rnd = two_stage(rnd, best.result.score, g.threshold, require_unclassified);
        // list-order screens need recorded presentation orders
        let sat_cell = if m.order_recorded { sat.into() } else { Cell::Empty };
        satisficing += usize::from(m.order_recorded && sat);
        randomizing += usize::from(rnd);
        t.push(vec![
            m.subject.into(),
            m.observations.into(),
            m.avg_choice_proportion.into(),
            m.avg_choice_proportion_active.into(),
            m.deferral_count.into(),
            m.active_count.into(),
            m.choose_everything_count.into(),
            m.first_item_only_frequency.into(),
            m.avg_chosen_position.into(),
            m.order_recorded.into(),
            best.kind.code().into(),
            best.result.score.into(),
            (best.result.score <= g.threshold).into(),
            sat_cell,
            rnd.into(),
        ]);
    }
    let collections = menu_collections(data);
    let adjusted = match collections.as_slice() {
        [(mc, _)] => Some(adjusted_choice_size_frequencies(data, mc)?),
        _ => None,
    };
    let sum = json!({
        "subjects": data.len(),
        "threshold": g.threshold,
        "two_stage": require_unclassified,
        "cutoffs": cutoffs,
        "satisficing_flagged": satisficing,
        "randomization_flagged": randomizing,
        "choice_size_counts": choice_size_counts(data),
        "adjusted_choice_size_frequencies": adjusted,
    });
    Ok((t, sum))
}

#[derive(Serialize)]
struct SimulationMeta {
    generator: &'static str,
    seed: u64,
    subjects: usize,
    alternatives: usize,
    menus: usize,
    menu_sizes: Vec<usize>,
    forced: bool,
    #[serde(skip_serializing_if = "Option::is_none")]
    cutoffs: Option<serde_json::Value>,
}

fn simulated_cohort(
    mc: MenuCollection,
    subjects: usize,
    g: &Global,
    percentile: Option<f64>,
    exec: Execution,
) -> Result<(Vec<Dataset>, SimulationMeta)> {
    let mut sizes: Vec<usize> = mc.menus().iter().map(|m| m.len()).collect();
    sizes.sort_unstable();
    sizes.dedup();
    let (n, menus) = (mc.n(), mc.len());
    let cfg = SimConfig::new(mc, subjects, g.forced, g.seed)?;
    let data = simulate_uniform(&cfg, exec);
    let cutoffs = match percentile {
        Some(p) => {
            let mut kinds = models(g)?;
            if g.forced {
                // forced data never defer, so dominant choice adds nothing there
                kinds.retain(|&k| k != ModelKind::DominantChoice);
            }
            Some(json!({
                "percentile": p,
                "scores": calibrate_scores(&data, &kinds, p, exec)?,
                "screens": calibrate_screens(&data, p)?,
            }))
        }
        None => None,
    };
    let meta = SimulationMeta {
        generator: GENERATOR_ID,
        seed: g.seed,
        subjects,
        alternatives: n,
        menus,
        menu_sizes: sizes,
        forced: g.forced,
        cutoffs,
    };
    Ok((data, meta))
}

fn simulate(g: &Global, args: &SimulateArgs, exec: Execution, out: &Emitter) -> Result<()> {
    let mc = generate_menu_collection(args.n, &args.sizes)?;
    let (data, meta) = simulated_cohort(mc, args.subjects, g, args.percentile, exec)?;
    out.emit(&write_csv(&data))?;
    let meta_text = to_json(&meta)?;
    let meta_path = args.meta.clone().or_else(|| {
        g.out.as_ref().map(|p| {
            let mut s = p.as_os_str().to_owned();
            s.push(".meta.json");
            s.into()
        })
    });
    match meta_path {
        Some(p) => write_file(&p, &meta_text),
        None => {
            eprint!("{meta_text}");
            Ok(())
        }
    }
}

fn graph(g: &Global, args: &GraphArgs) -> Result<String> {
    let [path] = g.input.as_slice() else {
        bail!("graph needs exactly one --input relation file");
    };
    let text = std::fs::read_to_string(path).with_context(|| format!("reading {}", path.display()))?;
    let r = BinaryRelation::from_text(&text).with_context(|| format!("parsing {}", path.display()))?;
    Ok(to_dot(&r, &args.name)?)
}

/// Distinct file stems, disambiguated by a numeric suffix on collision.
fn graph_names(data: &[Dataset]) -> Vec<String> {
    let mut used = BTreeSet::new();
    data.iter()
        .map(|d| {
            let stem = file_stem(&d.subject_id);
            let mut name = stem.clone();
            let mut k = 2;
            while !used.insert(name.clone()) {
                name = format!("{stem}-{k}");
                k += 1;
            }
            name
        })
        .collect()
}

fn report(g: &Global, args: &ReportArgs, exec: Execution) -> Result<()> {
    let dir = g.out.as_deref().context("report needs --out <directory>")?;
    let data = load(g)?;
    let kinds = models(g)?;
    let format = g.format;
    let ext = match format {
        crate::Format::Csv => "csv",
        crate::Format::Json => "json",
    };
    let put = |name: &str, text: &str| write_file(&dir.join(name), text);

    put("validation.json", &to_json(&validation(&data))?)?;

    let results = Scorer::new(exec).score_all(&data, &kinds)?;
    put(&format!("scores.{ext}"), &score_table(&data, &kinds, &results).render(format)?)?;
    put("cohort.json", &to_json(&score_summary(&kinds, &results, g.threshold)?)?)?;

    put(&format!("axioms.{ext}"), &axiom_table(&data, &Axiom::ALL, revpref::revealed::DEFAULT_WITNESS_CAP, exec).render(format)?)?;
    put(&format!("rationalizations.{ext}"), &rationalizations(&data, exec)?.render(format)?)?;

    let (table, sum) = separation(&data, SeparationMethod::Dominant, exec)?;
    put(&format!("separation.{ext}"), &table.render(format)?)?;
    put("separation_summary.json", &to_json(&sum)?)?;

    let metric_args = MetricsArgs {
        no_two_stage: false,
        first_item_cutoff: None,
        position_cutoff: None,
        choose_everything_cutoff: None,
        summary: SummaryArgs { summary: None },
    };
    let (table, sum) = metrics(&data, &kinds, g, &metric_args, exec)?;
    put(&format!("metrics.{ext}"), &table.render(format)?)?;
    put("metrics_summary.json", &to_json(&sum)?)?;

    for ((d, row), name) in data.iter().zip(&results).zip(graph_names(&data)) {
        let best = best_of(row).expect("at least one model");
        if let Some(r) = best.result.optimal_relations.first() {
            let title = format!("{} ({}, score {})", d.subject_id, best.kind.code(), best.result.score);
            put(&format!("graphs/{name}.dot"), &to_dot(r, &title)?)?;
        }
    }

    if let Some(subjects) = args.simulate {
        let collections = menu_collections(&data);
        let [(mc, _)] = collections.as_slice() else {
            bail!("--simulate needs every subject to face the same menus");
        };
        let (sim, meta) = simulated_cohort(mc.clone(), subjects, g, Some(args.percentile), exec)?;
        put("simulation.csv", &write_csv(&sim))?;
        put("simulation_meta.json", &to_json(&meta)?)?;
    }
    eprintln!("wrote report for {} subjects to {}", data.len(), dir.display());
    Ok(())
}
