//! Integer programming model of the social-temporal group query.
//!
//! Variables, with vertex names substituted verbatim:
//!
//! | name | domain | meaning |
//! |---|---|---|
//! | `delta_<u>` | real, `>= 0` | distance of the path from the initiator to `u` |
//! | `phi_<u>` | binary | `u` attends |
//! | `pi_<u>_<i>_<j>` | binary | arc `i -> j` lies on the path to `u` |
//! | `tau_<t>` | binary | the activity starts at slot `t` |
//!
//! Constraint families, each tagged `c<family>_<index>` with a 0-based index:
//!
//! 1. `sum_u phi_u = p`
//! 2. `phi_q = 1`
//! 3. `sum_{v in N(u)} phi_v - (p-1) phi_u >= -k` for every `u`
//! 4. `sum_{i in N(q)} pi_{u,q,i} - phi_u = 0` for `u != q`
//! 5. `sum_{i in N(u)} pi_{u,i,u} - phi_u = 0` for `u != q`
//! 6. `sum_{i in N(j)} pi_{u,i,j} - sum_{i in N(j)} pi_{u,j,i} = 0` for
//!    `u != q`, `j` not in `{q, u}`
//! 7. `sum_{(i,j)} c_ij pi_{u,i,j} - delta_u = 0` for every `u`
//! 8. `sum_{(i,j)} pi_{u,i,j} <= s` for `u != q`
//! 9. `sum_t tau_t = 1`
//! 10. `phi_u + tau_t <= 1 + a(u, t')` for every `u`, start `t`, and `t'` in
//!     `[t, t+m-1]`
//!
//! The social variant drops families 9 and 10 and every `tau`. Vertices are
//! ordered initiator first, then by id; arcs follow the edge order of the
//! graph with the `u < v` orientation first.

use std::collections::{BTreeMap, HashMap};
use std::fmt::{self, Write as _};

use crate::error::{Error, Result};
use crate::graph::{FeasibleGraph, SocialGraph, VertexId};
use crate::schedule::{AvailabilityTable, SlotRange};
use crate::sgq::{Group, SgqQuery};
use crate::stgq::StgqQuery;

/// Absolute tolerance for constraint checks, scaled by the row magnitude.
pub const CHECK_TOLERANCE: f64 = 1e-9;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum VarKind {
    Delta,
    Phi,
    Pi,
    Tau,
}

impl VarKind {
    pub fn is_binary(self) -> bool {
        self != VarKind::Delta
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct Variable {
    pub name: String,
    pub kind: VarKind,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Sense {
    Eq,
    Le,
    Ge,
}

impl fmt::Display for Sense {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Sense::Eq => "=",
            Sense::Le => "<=",
            Sense::Ge => ">=",
        })
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct Constraint {
    pub family: u8,
    pub index: usize,
    /// `(variable index, coefficient)`.
    pub terms: Vec<(usize, f64)>,
    pub sense: Sense,
    pub rhs: f64,
}

impl Constraint {
    pub fn tag(&self) -> String {
        format!("c{}_{}", self.family, self.index)
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct IpModel {
    variables: Vec<Variable>,
    by_name: HashMap<String, usize>,
    constraints: Vec<Constraint>,
    objective: Vec<(usize, f64)>,
    header: String,
    temporal: bool,
}

impl IpModel {
    pub fn variables(&self) -> &[Variable] {
        &self.variables
    }

    pub fn constraints(&self) -> &[Constraint] {
        &self.constraints
    }

    pub fn objective(&self) -> &[(usize, f64)] {
        &self.objective
    }

    pub fn is_temporal(&self) -> bool {
        self.temporal
    }

    pub fn variable(&self, name: &str) -> Option<usize> {
        self.by_name.get(name).copied()
    }

    pub fn count_kind(&self, kind: VarKind) -> usize {
        self.variables.iter().filter(|v| v.kind == kind).count()
    }

    pub fn family_count(&self, family: u8) -> usize {
        self.constraints
            .iter()
            .filter(|c| c.family == family)
            .count()
    }

    pub fn constraint(&self, tag: &str) -> Option<&Constraint> {
        self.constraints.iter().find(|c| c.tag() == tag)
    }
}

pub fn delta_name(graph: &SocialGraph, u: VertexId) -> String {
    format!("delta_{}", graph.name(u))
}

pub fn phi_name(graph: &SocialGraph, u: VertexId) -> String {
    format!("phi_{}", graph.name(u))
}

pub fn pi_name(graph: &SocialGraph, u: VertexId, i: VertexId, j: VertexId) -> String {
    format!("pi_{}_{}_{}", graph.name(u), graph.name(i), graph.name(j))
}

pub fn tau_name(t: usize) -> String {
    format!("tau_{t}")
}

struct Builder<'g> {
    graph: &'g SocialGraph,
    model: IpModel,
    next_index: [usize; 11],
}

impl<'g> Builder<'g> {
    fn var(&mut self, name: String, kind: VarKind) -> usize {
        let id = self.model.variables.len();
        self.model.by_name.insert(name.clone(), id);
        self.model.variables.push(Variable { name, kind });
        id
    }

    fn id(&self, name: &str) -> usize {
        self.model.by_name[name]
    }

    fn push(&mut self, family: u8, terms: Vec<(usize, f64)>, sense: Sense, rhs: f64) {
        let index = self.next_index[family as usize];
        self.next_index[family as usize] += 1;
        self.model.constraints.push(Constraint {
            family,
            index,
            terms,
            sense,
            rhs,
        });
    }
}

/// Directed arcs, both orientations of every edge.
fn arcs(graph: &SocialGraph) -> Vec<(VertexId, VertexId, f64)> {
    graph
        .edges()
        .flat_map(|(u, v, w)| [(u, v, w), (v, u, w)])
        .collect()
}

fn build(
    graph: &SocialGraph,
    query: &SgqQuery,
    temporal: Option<(&AvailabilityTable, usize)>,
) -> IpModel {
    let q = query.initiator;
    let order: Vec<VertexId> = std::iter::once(q)
        .chain(graph.vertices().filter(|&v| v != q))
        .collect();
    let arcs = arcs(graph);

    let mut header = format!(
        "{} model: initiator={} p={} s={} k={}",
        if temporal.is_some() { "stgq" } else { "sgq" },
        graph.name(q),
        query.p,
        query.s,
        query.k
    );
    if let Some((table, m)) = temporal {
        write!(header, " m={m} T={}", table.horizon()).unwrap();
    }
    let mut b = Builder {
        graph,
        model: IpModel {
            variables: Vec::new(),
            by_name: HashMap::new(),
            constraints: Vec::new(),
            objective: Vec::new(),
            header,
            temporal: temporal.is_some(),
        },
        next_index: [0; 11],
    };

    for &u in &order {
        b.var(delta_name(graph, u), VarKind::Delta);
    }
    for &u in &order {
        b.var(phi_name(graph, u), VarKind::Phi);
    }
    for &u in &order {
        for &(i, j, _) in &arcs {
            b.var(pi_name(graph, u, i, j), VarKind::Pi);
        }
    }
    let starts = temporal.map_or(0, |(table, m)| table.horizon() + 1 - m);
    for t in 1..=starts {
        b.var(tau_name(t), VarKind::Tau);
    }

    b.model.objective = order
        .iter()
        .map(|&u| (b.id(&delta_name(graph, u)), 1.0))
        .collect();

    let phi = |b: &Builder<'_>, u: VertexId| b.id(&phi_name(b.graph, u));
    let pi =
        |b: &Builder<'_>, u: VertexId, i: VertexId, j: VertexId| b.id(&pi_name(b.graph, u, i, j));

    // (1), (2)
    let terms = order.iter().map(|&u| (phi(&b, u), 1.0)).collect();
    b.push(1, terms, Sense::Eq, query.p as f64);
    b.push(2, vec![(phi(&b, q), 1.0)], Sense::Eq, 1.0);

    // (3)
    for &u in &order {
        let mut terms: Vec<(usize, f64)> = graph
            .neighbors(u)
            .iter()
            .map(|&(v, _)| (phi(&b, v), 1.0))
            .collect();
        terms.push((phi(&b, u), -(query.p as f64 - 1.0)));
        b.push(3, terms, Sense::Ge, 0.0 - query.k as f64);
    }

    let others: Vec<VertexId> = order[1..].to_vec();
    // (4), (5)
    for &u in &others {
        let mut terms: Vec<(usize, f64)> = graph
            .neighbors(q)
            .iter()
            .map(|&(i, _)| (pi(&b, u, q, i), 1.0))
            .collect();
        terms.push((phi(&b, u), -1.0));
        b.push(4, terms, Sense::Eq, 0.0);
    }
    for &u in &others {
        let mut terms: Vec<(usize, f64)> = graph
            .neighbors(u)
            .iter()
            .map(|&(i, _)| (pi(&b, u, i, u), 1.0))
            .collect();
        terms.push((phi(&b, u), -1.0));
        b.push(5, terms, Sense::Eq, 0.0);
    }
    // (6)
    for &u in &others {
        for &j in &others {
            if j == u {
                continue;
            }
            let nbrs = graph.neighbors(j);
            let terms = nbrs
                .iter()
                .map(|&(i, _)| (pi(&b, u, i, j), 1.0))
                .chain(nbrs.iter().map(|&(i, _)| (pi(&b, u, j, i), -1.0)))
                .collect();
            b.push(6, terms, Sense::Eq, 0.0);
        }
    }
    // (7)
    for &u in &order {
        let mut terms: Vec<(usize, f64)> =
            arcs.iter().map(|&(i, j, w)| (pi(&b, u, i, j), w)).collect();
        terms.push((b.id(&delta_name(graph, u)), -1.0));
        b.push(7, terms, Sense::Eq, 0.0);
    }
    // (8)
    for &u in &others {
        let terms = arcs
            .iter()
            .map(|&(i, j, _)| (pi(&b, u, i, j), 1.0))
            .collect();
        b.push(8, terms, Sense::Le, query.s as f64);
    }

    if let Some((table, m)) = temporal {
        // (9)
        let terms = (1..=starts).map(|t| (b.id(&tau_name(t)), 1.0)).collect();
        b.push(9, terms, Sense::Eq, 1.0);
        // (10)
        for &u in &order {
            for t in 1..=starts {
                for slot in t..t + m {
                    let a = table.is_available(graph.name(u), slot) as u8 as f64;
                    let terms = vec![(phi(&b, u), 1.0), (b.id(&tau_name(t)), 1.0)];
                    b.push(10, terms, Sense::Le, 1.0 + a);
                }
            }
        }
    }
    b.model
}

/// Social variant: families 1 to 8, no `tau` variables.
pub fn build_sgq_model(graph: &SocialGraph, query: &SgqQuery) -> Result<IpModel> {
    query.validate(graph)?;
    Ok(build(graph, query, None))
}

pub fn build_stgq_model(
    graph: &SocialGraph,
    table: &AvailabilityTable,
    query: &StgqQuery,
) -> Result<IpModel> {
    query.validate(graph)?;
    if table.horizon() < query.m {
        return Err(Error::input(format!(
            "activity length {} exceeds the horizon of {} slots",
            query.m,
            table.horizon()
        )));
    }
    Ok(build(graph, &query.social, Some((table, query.m))))
}

fn write_terms(out: &mut String, model: &IpModel, terms: &[(usize, f64)]) {
    if terms.is_empty() {
        // a row with no arcs (isolated vertex); keep it well-formed
        write!(out, "0 {}", model.variables[0].name).unwrap();
        return;
    }
    for (n, &(var, coef)) in terms.iter().enumerate() {
        let name = &model.variables[var].name;
        let (sign, mag) = if coef < 0.0 {
            ("-", -coef)
        } else {
            ("+", coef)
        };
        match (n == 0, sign) {
            (true, "+") => {}
            (true, _) => out.push_str("- "),
            (false, s) => write!(out, " {s} ").unwrap(),
        }
        if mag == 1.0 {
            out.push_str(name);
        } else {
            write!(out, "{mag} {name}").unwrap();
        }
    }
}

/// CPLEX-style LP text. Identical models give identical bytes.
pub fn emit_lp_text(model: &IpModel) -> String {
    let mut out = String::new();
    writeln!(out, "\\ {}", model.header).unwrap();
    out.push_str("Minimize\nobj: ");
    write_terms(&mut out, model, &model.objective);
    out.push_str("\nSubject To\n");
    for c in &model.constraints {
        write!(out, "{}: ", c.tag()).unwrap();
        write_terms(&mut out, model, &c.terms);
        writeln!(out, " {} {}", c.sense, c.rhs).unwrap();
    }
    out.push_str("Bounds\n");
    for v in model.variables.iter().filter(|v| v.kind == VarKind::Delta) {
        writeln!(out, "{} >= 0", v.name).unwrap();
    }
    out.push_str("Binaries\n");
    for v in model.variables.iter().filter(|v| v.kind.is_binary()) {
        writeln!(out, "{}", v.name).unwrap();
    }
    out.push_str("End\n");
    out
}

/// Values keyed by variable name.
pub type Assignment = BTreeMap<String, f64>;

#[derive(Clone, Debug, PartialEq)]
pub struct CheckReport {
    pub feasible: bool,
    /// Tags of violated constraints, in model order.
    pub violated: Vec<String>,
    /// Variables outside their domain (non-binary value, negative distance).
    pub out_of_domain: Vec<String>,
    pub objective: f64,
}

fn within(lhs: f64, sense: Sense, rhs: f64, scale: f64) -> bool {
    let tol = CHECK_TOLERANCE * scale.max(1.0);
    match sense {
        Sense::Eq => (lhs - rhs).abs() <= tol,
        Sense::Le => lhs <= rhs + tol,
        Sense::Ge => lhs >= rhs - tol,
    }
}

/// Evaluates every constraint and variable domain of `model` under `asg`.
pub fn check_assignment(model: &IpModel, asg: &Assignment) -> Result<CheckReport> {
    let mut values = Vec::with_capacity(model.variables.len());
    for v in &model.variables {
        match asg.get(&v.name) {
            Some(&x) => values.push(x),
            None => {
                return Err(Error::input(format!(
                    "assignment has no value for {}",
                    v.name
                )))
            }
        }
    }
    if let Some(extra) = asg.keys().find(|k| !model.by_name.contains_key(*k)) {
        return Err(Error::input(format!(
            "assignment names unknown variable {extra}"
        )));
    }

    let out_of_domain: Vec<String> = model
        .variables
        .iter()
        .zip(&values)
        .filter(|(v, &x)| {
            if v.kind.is_binary() {
                !(within(x, Sense::Eq, 0.0, 1.0) || within(x, Sense::Eq, 1.0, 1.0))
            } else {
                !within(x, Sense::Ge, 0.0, x.abs())
            }
        })
        .map(|(v, _)| v.name.clone())
        .collect();

    let violated: Vec<String> = model
        .constraints
        .iter()
        .filter(|c| {
            let lhs: f64 = c.terms.iter().map(|&(i, a)| a * values[i]).sum();
            let scale = c
                .terms
                .iter()
                .map(|&(i, a)| (a * values[i]).abs())
                .sum::<f64>()
                + c.rhs.abs();
            !within(lhs, c.sense, c.rhs, scale)
        })
        .map(Constraint::tag)
        .collect();

    let objective = model.objective.iter().map(|&(i, a)| a * values[i]).sum();
    Ok(CheckReport {
        feasible: violated.is_empty() && out_of_domain.is_empty(),
        violated,
        out_of_domain,
        objective,
    })
}

/// Encodes a solver answer: members get `phi = 1`, a witness path of at most
/// `s` edges from the feasible graph, and `delta` equal to that path's
/// length; everything else is zero. `period` must be given exactly when the
/// model is temporal.
pub fn solution_to_assignment(
    model: &IpModel,
    fg: &FeasibleGraph<'_>,
    group: &Group,
    period: Option<SlotRange>,
) -> Result<Assignment> {
    let graph = fg.graph();
    let mut asg: Assignment = model
        .variables
        .iter()
        .map(|v| (v.name.clone(), 0.0))
        .collect();
    let mut set = |name: String, x: f64| match asg.get_mut(&name) {
        Some(slot) => {
            *slot = x;
            Ok(())
        }
        None => Err(Error::input(format!("model has no variable {name}"))),
    };
    for &u in &group.members {
        set(phi_name(graph, u), 1.0)?;
        if u == fg.origin() {
            continue;
        }
        let path = fg.reconstruct_path(u)?;
        let mut length = 0.0;
        for pair in path.windows(2) {
            length += graph.weight(pair[0], pair[1]).expect("path follows edges");
            set(pi_name(graph, u, pair[0], pair[1]), 1.0)?;
        }
        set(delta_name(graph, u), length)?;
    }
    match (model.temporal, period) {
        (true, Some(p)) => set(tau_name(p.start), 1.0)?,
        (false, None) => {}
        (true, None) => return Err(Error::input("temporal model needs an activity period")),
        (false, Some(_)) => return Err(Error::input("social model takes no activity period")),
    }
    Ok(asg)
}
