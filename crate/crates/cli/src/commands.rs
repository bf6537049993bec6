use std::fs;
use std::io::Write;
use std::path::Path;
use std::time::Instant;

use serde::Serialize;
use stgq_core::baselines::{brute_force_sgq, pc_arrange, per_slot_stgq, stg_arrange, SlotSolver};
use stgq_core::io::{
    generate, initiator_hint, parse_graph, parse_schedule, serialize_schedule, write_solution,
    EdgeModel, GenConfig, Problem, SolutionDocument, Status as DocStatus,
};
use stgq_core::ip::{build_sgq_model, build_stgq_model, emit_lp_text};
use stgq_core::{
    solve_sgq_with, solve_stgq_with, AvailabilityTable, PruneConfig, SearchStats, SgqQuery,
    SlotRange, SocialGraph, StgqQuery, VertexId,
};

use crate::{
    AcquaintanceArgs, BaselineArgs, CliError, CompareArgs, ExportIpArgs, Format, GenArgs,
    GraphArgs, Method, Model, Prune, ScheduleArgs, SolveSgqArgs, SolveStgqArgs, Status, Variant,
};

type CmdResult = Result<Status, CliError>;

fn read(path: &Path) -> Result<String, CliError> {
    fs::read_to_string(path).map_err(|source| CliError::Io {
        path: path.to_path_buf(),
        source,
    })
}

fn write_file(path: &Path, text: &str) -> Result<(), CliError> {
    fs::write(path, text).map_err(|source| CliError::Io {
        path: path.to_path_buf(),
        source,
    })
}

fn load_graph(args: &GraphArgs) -> Result<(SocialGraph, VertexId), CliError> {
    let text = read(&args.graph)?;
    let graph = parse_graph(&text)?;
    let name = match &args.initiator {
        Some(name) => name.clone(),
        None => initiator_hint(&text).ok_or_else(|| {
            CliError::Usage(
                "no --initiator given and the graph file has no `# initiator` line".into(),
            )
        })?,
    };
    let q = graph.require(&name)?;
    Ok((graph, q))
}

fn load_schedule(path: &Path) -> Result<AvailabilityTable, CliError> {
    Ok(parse_schedule(&read(path)?)?)
}

fn social_query(q: VertexId, g: &GraphArgs, acq: &AcquaintanceArgs) -> SgqQuery {
    SgqQuery::new(q, g.p, g.s, acq.k).with_theta0(acq.theta0)
}

fn temporal_query(social: SgqQuery, s: &ScheduleArgs) -> StgqQuery {
    StgqQuery::new(social, s.m).with_phi(s.phi0, s.phi_max)
}

fn prune_config(disabled: &[Prune]) -> PruneConfig {
    let mut cfg = PruneConfig::default();
    for p in disabled {
        match p {
            Prune::Distance => cfg.distance = false,
            Prune::Acquaintance => cfg.acquaintance = false,
            Prune::Exterior => cfg.exterior = false,
            Prune::Availability => cfg.availability = false,
        }
    }
    cfg
}

fn fmt_period(r: SlotRange) -> String {
    format!("{}..{}", r.start, r.end)
}

fn emit(doc: &SolutionDocument, format: Format, out: &mut dyn Write) -> CmdResult {
    match format {
        Format::Json => out.write_all(write_solution(doc).as_bytes())?,
        Format::Text => {
            let status = match doc.status {
                DocStatus::Optimal => "optimal",
                DocStatus::Failure => "failure",
            };
            writeln!(out, "status: {status}")?;
            writeln!(out, "initiator: {}", doc.initiator)?;
            if let Some(total) = doc.total {
                writeln!(out, "members: {}", doc.members.join(" "))?;
                writeln!(out, "total: {total}")?;
            }
            if let Some(period) = doc.period {
                writeln!(out, "period: {}", fmt_period(period))?;
            }
            let s = &doc.stats;
            writeln!(out, "nodes: {}", s.nodes_expanded)?;
            writeln!(
                out,
                "prunes: distance={} acquaintance={} exterior={} interior={} availability={}",
                s.prunes.distance,
                s.prunes.acquaintance,
                s.prunes.exterior,
                s.prunes.interior,
                s.prunes.availability
            )?;
            writeln!(out, "elapsed_ms: {:.3}", s.elapsed.as_secs_f64() * 1e3)?;
        }
    }
    Ok(match doc.status {
        DocStatus::Optimal => Status::Done,
        DocStatus::Failure => Status::Infeasible,
    })
}

pub fn gen(a: GenArgs, out: &mut dyn Write) -> CmdResult {
    let cfg = GenConfig {
        n: a.n,
        model: match a.model {
            Model::Attachment => EdgeModel::Attachment,
            Model::Uniform => EdgeModel::Uniform,
        },
        edges_per_vertex: a.edges_per_vertex,
        weight_range: (a.weight_min, a.weight_max),
        horizon: a.horizon,
        avail_prob: a.avail_prob,
        run_bias: a.run_bias,
        seed: a.seed,
    };
    let inst = generate(&cfg)?;
    write_file(&a.graph_out, &inst.graph_text())?;
    write_file(&a.schedule_out, &serialize_schedule(&inst.table))?;
    writeln!(
        out,
        "wrote {} vertices, {} edges, {} slots; initiator {}",
        inst.graph.num_vertices(),
        inst.graph.num_edges(),
        inst.table.horizon(),
        inst.graph.name(inst.initiator)
    )?;
    Ok(Status::Done)
}

pub fn solve_sgq(a: SolveSgqArgs, out: &mut dyn Write) -> CmdResult {
    let (graph, q) = load_graph(&a.graph)?;
    let query = social_query(q, &a.graph, &a.acq);
    let report = solve_sgq_with(&graph, &query, prune_config(&a.disable))?;
    let found = report.solution.as_ref().map(|g| (g, None));
    let doc = SolutionDocument::new(Problem::Sgq, &graph, q, found, report.stats);
    emit(&doc, a.output.format, out)
}

pub fn solve_stgq(a: SolveStgqArgs, out: &mut dyn Write) -> CmdResult {
    let (graph, q) = load_graph(&a.graph)?;
    let table = load_schedule(&a.schedule.schedule)?;
    let query = temporal_query(social_query(q, &a.graph, &a.acq), &a.schedule);
    let report = solve_stgq_with(&graph, &table, &query, prune_config(&a.disable))?;
    let found = report.solution.as_ref().map(|s| (&s.group, Some(s.period)));
    let doc = SolutionDocument::new(Problem::Stgq, &graph, q, found, report.stats);
    emit(&doc, a.output.format, out)
}

fn temporal_inputs(
    schedule: Option<&Path>,
    m: Option<usize>,
    what: &str,
) -> Result<(AvailabilityTable, usize), CliError> {
    match (schedule, m) {
        (Some(path), Some(m)) => Ok((load_schedule(path)?, m)),
        _ => Err(CliError::Usage(format!("{what} needs --schedule and -m"))),
    }
}

pub fn baseline(a: BaselineArgs, out: &mut dyn Write) -> CmdResult {
    let (graph, q) = load_graph(&a.graph)?;
    let social = social_query(q, &a.graph, &a.acq);
    match a.method {
        Method::Brute => {
            let clock = Instant::now();
            let best = brute_force_sgq(&graph, &social, a.cap)?;
            let stats = SearchStats {
                elapsed: clock.elapsed(),
                ..SearchStats::default()
            };
            let doc = SolutionDocument::new(
                Problem::Sgq,
                &graph,
                q,
                best.as_ref().map(|g| (g, None)),
                stats,
            );
            emit(&doc, a.output.format, out)
        }
        Method::PerSlot => {
            let (table, m) = temporal_inputs(a.schedule.as_deref(), a.m, "per-slot")?;
            let solver = if a.brute_slots {
                SlotSolver::BruteForce { cap: a.cap }
            } else {
                SlotSolver::Select
            };
            let report = per_slot_stgq(&graph, &table, &StgqQuery::new(social, m), solver)?;
            let found = report.solution.as_ref().map(|s| (&s.group, Some(s.period)));
            let doc = SolutionDocument::new(Problem::Stgq, &graph, q, found, report.stats);
            emit(&doc, a.output.format, out)
        }
        Method::PcArrange => {
            let (table, m) = temporal_inputs(a.schedule.as_deref(), a.m, "pc-arrange")?;
            let clock = Instant::now();
            let result = pc_arrange(&graph, &table, &StgqQuery::new(social, m))?;
            let stats = SearchStats {
                elapsed: clock.elapsed(),
                ..SearchStats::default()
            };
            let found = result.as_ref().map(|r| (&r.group, Some(r.period)));
            let doc = SolutionDocument::new(Problem::Stgq, &graph, q, found, stats);
            let status = emit(&doc, a.output.format, out)?;
            if let (Some(r), Format::Text) = (&result, a.output.format) {
                writeln!(out, "k_h: {}", r.k_h)?;
            }
            Ok(status)
        }
    }
}

#[derive(Serialize)]
struct Arrangement {
    members: Vec<String>,
    total: f64,
    period: SlotRange,
}

#[derive(Serialize)]
struct Comparison {
    initiator: String,
    /// Acquaintance bound observed in the greedy group.
    k_h: usize,
    /// Smallest bound whose exact optimum is no worse than the greedy one.
    k_star: usize,
    pc_arrange: Arrangement,
    stg_arrange: Arrangement,
}

pub fn compare(a: CompareArgs, out: &mut dyn Write) -> CmdResult {
    let (graph, q) = load_graph(&a.graph)?;
    let table = load_schedule(&a.schedule.schedule)?;
    let social = SgqQuery::new(q, a.graph.p, a.graph.s, 0);
    let query = temporal_query(social, &a.schedule);
    let Some(r) = stg_arrange(&graph, &table, &query)? else {
        match a.output.format {
            Format::Json => writeln!(out, "null")?,
            Format::Text => writeln!(out, "status: failure")?,
        }
        return Ok(Status::Infeasible);
    };
    let names = |members: &[VertexId]| {
        members
            .iter()
            .map(|&v| graph.name(v).to_string())
            .collect::<Vec<_>>()
    };
    let cmp = Comparison {
        initiator: graph.name(q).to_string(),
        k_h: r.pc.k_h,
        k_star: r.k,
        pc_arrange: Arrangement {
            members: names(&r.pc.group.members),
            total: r.pc.group.total,
            period: r.pc.period,
        },
        stg_arrange: Arrangement {
            members: names(&r.solution.group.members),
            total: r.solution.group.total,
            period: r.solution.period,
        },
    };
    match a.output.format {
        Format::Json => {
            serde_json::to_writer_pretty(&mut *out, &cmp)
                .map_err(|e| CliError::Output(e.to_string()))?;
            writeln!(out)?;
        }
        Format::Text => {
            for (label, arr) in [
                ("pc-arrange", &cmp.pc_arrange),
                ("stg-arrange", &cmp.stg_arrange),
            ] {
                writeln!(
                    out,
                    "{label}: total {} period {} members {}",
                    arr.total,
                    fmt_period(arr.period),
                    arr.members.join(" ")
                )?;
            }
            writeln!(out, "k_h: {}", cmp.k_h)?;
            writeln!(out, "k*: {}", cmp.k_star)?;
        }
    }
    Ok(Status::Done)
}

pub fn export_ip(a: ExportIpArgs, out: &mut dyn Write) -> CmdResult {
    let (graph, q) = load_graph(&a.graph)?;
    let social = SgqQuery::new(q, a.graph.p, a.graph.s, a.k);
    let model = match a.variant {
        Variant::Sgq => build_sgq_model(&graph, &social)?,
        Variant::Stgq => {
            let (table, m) = temporal_inputs(a.schedule.as_deref(), a.m, "the stgq variant")?;
            build_stgq_model(&graph, &table, &StgqQuery::new(social, m))?
        }
    };
    let text = emit_lp_text(&model);
    match &a.out {
        Some(path) => write_file(path, &text)?,
        None => out.write_all(text.as_bytes())?,
    }
    Ok(Status::Done)
}
