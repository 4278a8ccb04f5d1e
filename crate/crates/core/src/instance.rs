//! MovingAI map/scenario files and deterministic cost models.
//!
//! Random costs are drawn from ChaCha8 (`rand_chacha::ChaCha8Rng`), a 64-bit
//! seeded counter-mode generator. Edges consume the stream in a fixed order:
//! passable cells row-major, and for each cell its self-loop, then its east
//! edge, then its south edge, each edge drawing `M` values in objective order.
//! Both directions of a move share the sampled vector.

use std::collections::HashSet;

use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::cost::CostVector;
use crate::error::ParseError;
use crate::graph::{Direction, EdgeCosts, GridGraph, Vertex};

/// Parses the MovingAI `.map` format (`type`, `height`, `width`, `map`, rows).
pub fn parse_map(text: &str) -> Result<GridGraph, ParseError> {
    let mut lines = text.lines().enumerate().map(|(i, l)| (i + 1, l.trim_end_matches('\r')));
    let mut height = None;
    let mut width = None;
    loop {
        let (no, line) = lines
            .next()
            .ok_or_else(|| ParseError::syntax(0, 0, "missing `map` header line"))?;
        let mut parts = line.split_whitespace();
        match parts.next() {
            Some("type") => {}
            Some("height") => height = Some(parse_dim(parts.next(), no)?),
            Some("width") => width = Some(parse_dim(parts.next(), no)?),
            Some("map") => break,
            Some(other) => {
                return Err(ParseError::syntax(no, 1, format!("unexpected header `{other}`")))
            }
            None => return Err(ParseError::syntax(no, 1, "empty header line")),
        }
    }
    let height = height.ok_or_else(|| ParseError::syntax(0, 0, "missing height"))?;
    let width = width.ok_or_else(|| ParseError::syntax(0, 0, "missing width"))?;

    let mut passable = Vec::with_capacity((width * height) as usize);
    let mut last_line = 0;
    for row in 0..height {
        let (no, line) = lines.next().ok_or_else(|| {
            ParseError::syntax(last_line + 1, 1, format!("expected {height} rows, found {row}"))
        })?;
        last_line = no;
        let cells: Vec<char> = line.chars().collect();
        if cells.len() != width as usize {
            return Err(ParseError::syntax(
                no,
                cells.len().min(width as usize) + 1,
                format!("expected {width} cells, found {}", cells.len()),
            ));
        }
        for (col, ch) in cells.into_iter().enumerate() {
            passable.push(match ch {
                '.' | 'G' => true,
                '@' | 'T' | 'O' => false,
                other => {
                    return Err(ParseError::syntax(no, col + 1, format!("unknown glyph `{other}`")))
                }
            });
        }
    }
    for (no, line) in lines {
        if !line.trim().is_empty() {
            return Err(ParseError::syntax(no, 1, "trailing content after the last row"));
        }
    }
    Ok(GridGraph::new(width, height, passable))
}

fn parse_dim(token: Option<&str>, line: usize) -> Result<u32, ParseError> {
    token
        .and_then(|t| t.parse::<u32>().ok())
        .filter(|&d| d > 0)
        .ok_or_else(|| ParseError::syntax(line, 1, "dimension must be a positive integer"))
}

/// Inverse of [`parse_map`], using `.` and `@`.
pub fn serialize_map(graph: &GridGraph) -> String {
    let mut out = format!(
        "type octile\nheight {}\nwidth {}\nmap\n",
        graph.height(),
        graph.width()
    );
    for y in 0..graph.height() {
        for x in 0..graph.width() {
            out.push(if graph.is_passable(graph.cell(x, y)) { '.' } else { '@' });
        }
        out.push('\n');
    }
    out
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct AgentTask {
    pub start: Vertex,
    pub goal: Vertex,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Scenario {
    pub map_name: String,
    pub agents: Vec<AgentTask>,
}

impl Scenario {
    /// The first `n` agents, or all of them if the file has fewer.
    pub fn truncated(&self, n: usize) -> Scenario {
        Scenario {
            map_name: self.map_name.clone(),
            agents: self.agents.iter().take(n).copied().collect(),
        }
    }
}

/// Parses a version-1 MovingAI `.scen` file against `graph`.
///
/// Body lines hold `bucket map width height sx sy gx gy optimal`;
/// coordinates are `(column, row)`.
pub fn parse_scen(text: &str, graph: &GridGraph) -> Result<Scenario, ParseError> {
    let mut lines = text
        .lines()
        .enumerate()
        .map(|(i, l)| (i + 1, l.trim_end_matches('\r')))
        .filter(|(_, l)| !l.trim().is_empty());
    match lines.next() {
        Some((_, header)) if header.split_whitespace().eq(["version", "1"]) => {}
        Some((_, header)) if header.trim() == "version 1.0" => {}
        Some((no, _)) => return Err(ParseError::syntax(no, 1, "expected `version 1` header")),
        None => return Err(ParseError::syntax(1, 1, "empty scenario file")),
    }
    let mut map_name = String::new();
    let mut agents = Vec::new();
    for (no, line) in lines {
        let fields: Vec<&str> = if line.contains('\t') {
            line.split('\t').collect()
        } else {
            line.split_whitespace().collect()
        };
        if fields.len() != 9 {
            return Err(ParseError::syntax(
                no,
                1,
                format!("expected 9 fields, found {}", fields.len()),
            ));
        }
        let num = |k: usize| -> Result<i64, ParseError> {
            fields[k]
                .trim()
                .parse::<f64>()
                .ok()
                .filter(|v| v.fract() == 0.0)
                .map(|v| v as i64)
                .ok_or_else(|| ParseError::syntax(no, k + 1, format!("`{}` is not an integer", fields[k])))
        };
        if map_name.is_empty() {
            map_name = fields[1].to_string();
        }
        let (sx, sy, gx, gy) = (num(4)?, num(5)?, num(6)?, num(7)?);
        let start = checked_cell(graph, sx, sy, no, "start")?;
        let goal = checked_cell(graph, gx, gy, no, "goal")?;
        agents.push(AgentTask { start, goal });
    }
    Ok(Scenario { map_name, agents })
}

fn checked_cell(graph: &GridGraph, x: i64, y: i64, line: usize, what: &str) -> Result<Vertex, ParseError> {
    if !graph.in_bounds(x, y) {
        return Err(ParseError::Invalid {
            line,
            message: format!("{what} ({x},{y}) is outside the map"),
        });
    }
    let v = graph.cell(x as u32, y as u32);
    if !graph.is_passable(v) {
        return Err(ParseError::Invalid {
            line,
            message: format!("{what} ({x},{y}) is a blocked cell"),
        });
    }
    Ok(v)
}

/// Formats a scenario as a version-1 `.scen` file (the `optimal` column is 0).
pub fn serialize_scen(scenario: &Scenario, graph: &GridGraph) -> String {
    let mut out = String::from("version 1\n");
    for a in &scenario.agents {
        let (sx, sy) = graph.coords(a.start);
        let (gx, gy) = graph.coords(a.goal);
        out.push_str(&format!(
            "0\t{}\t{}\t{}\t{sx}\t{sy}\t{gx}\t{gy}\t0\n",
            scenario.map_name,
            graph.width(),
            graph.height()
        ));
    }
    out
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "kebab-case")]
pub enum CostModelSpec {
    /// Every action gets `objectives` i.i.d. integers uniform in `[1, cmax]`.
    Random {
        objectives: usize,
        cmax: u64,
        seed: u64,
    },
    /// Two objectives: time (always 1) and the risk of the arrival cell.
    TimeRisk,
}

impl CostModelSpec {
    pub fn objectives(&self) -> usize {
        match self {
            CostModelSpec::Random { objectives, .. } => *objectives,
            CostModelSpec::TimeRisk => 2,
        }
    }

    pub fn build(&self, graph: &GridGraph) -> EdgeCosts {
        match *self {
            CostModelSpec::Random {
                objectives,
                cmax,
                seed,
            } => assign_random_costs(graph, objectives, cmax, seed),
            CostModelSpec::TimeRisk => assign_time_risk_costs(graph),
        }
    }
}

/// Samples a shared cost vector for every undirected edge and self-loop.
pub fn assign_random_costs(graph: &GridGraph, objectives: usize, cmax: u64, seed: u64) -> EdgeCosts {
    assert!(objectives >= 1, "at least one objective is required");
    assert!(cmax >= 1, "cmax must be at least 1");
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut costs = EdgeCosts::uniform(graph, CostVector::zero(objectives));
    for v in graph.vertices() {
        for d in [Direction::Wait, Direction::East, Direction::South] {
            if let Some(w) = graph.step(v, d) {
                let c: CostVector = (0..objectives).map(|_| rng.gen_range(1..=cmax)).collect();
                costs.set(v, w, c.clone());
                if w != v {
                    costs.set(w, v, c);
                }
            }
        }
    }
    costs
}

/// One plus the number of blocked cells among the 8 neighbours of `v`;
/// out-of-bounds neighbours do not count.
pub fn risk(graph: &GridGraph, v: Vertex) -> u64 {
    let (x, y) = graph.coords(v);
    let mut blocked = 0;
    for dy in -1i64..=1 {
        for dx in -1i64..=1 {
            if dx == 0 && dy == 0 {
                continue;
            }
            let (nx, ny) = (x as i64 + dx, y as i64 + dy);
            if graph.in_bounds(nx, ny) && !graph.is_passable(graph.cell(nx as u32, ny as u32)) {
                blocked += 1;
            }
        }
    }
    1 + blocked
}

/// Every action into (or waiting in) cell `c` costs `(1, risk(c))`.
pub fn assign_time_risk_costs(graph: &GridGraph) -> EdgeCosts {
    EdgeCosts::from_fn(graph, 2, |_, to| CostVector::from_slice(&[1, risk(graph, to)]))
}

/// Draws `n` agents with pairwise distinct starts and pairwise distinct goals
/// among the passable cells; a start may equal its own goal only if `n` exceeds
/// the free cells otherwise available.
pub fn random_scenario(graph: &GridGraph, n: usize, seed: u64) -> Scenario {
    let cells: Vec<Vertex> = graph.vertices().collect();
    assert!(n <= cells.len(), "more agents than free cells");
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut starts = cells.clone();
    starts.shuffle(&mut rng);
    let mut goals = cells;
    goals.shuffle(&mut rng);
    let mut used = HashSet::new();
    let mut agents = Vec::with_capacity(n);
    for &start in starts.iter().take(n) {
        let goal = goals
            .iter()
            .copied()
            .find(|g| *g != start && !used.contains(g))
            .or_else(|| goals.iter().copied().find(|g| !used.contains(g)))
            .expect("enough goals");
        used.insert(goal);
        agents.push(AgentTask { start, goal });
    }
    Scenario {
        map_name: String::from("generated"),
        agents,
    }
}

/// Self-contained instance export.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct InstanceDocument {
    /// Map in MovingAI text form.
    pub map: String,
    pub agents: Vec<AgentCoords>,
    pub cost_model: CostModelSpec,
    pub seed: Option<u64>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct AgentCoords {
    pub start: [u32; 2],
    pub goal: [u32; 2],
}

impl InstanceDocument {
    pub fn new(graph: &GridGraph, scenario: &Scenario, cost_model: CostModelSpec) -> Self {
        let seed = match cost_model {
            CostModelSpec::Random { seed, .. } => Some(seed),
            CostModelSpec::TimeRisk => None,
        };
        let xy = |v: Vertex| {
            let (x, y) = graph.coords(v);
            [x, y]
        };
        InstanceDocument {
            map: serialize_map(graph),
            agents: scenario
                .agents
                .iter()
                .map(|a| AgentCoords {
                    start: xy(a.start),
                    goal: xy(a.goal),
                })
                .collect(),
            cost_model,
            seed,
        }
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("instance documents always serialize")
    }

    pub fn from_json(text: &str) -> Result<Self, ParseError> {
        serde_json::from_str(text).map_err(|e| ParseError::Json(e.to_string()))
    }

    /// Rebuilds the graph and validated scenario.
    pub fn load(&self) -> Result<(GridGraph, Scenario), ParseError> {
        let graph = parse_map(&self.map)?;
        let mut agents = Vec::with_capacity(self.agents.len());
        for (k, a) in self.agents.iter().enumerate() {
            let start = checked_cell(&graph, a.start[0] as i64, a.start[1] as i64, k + 1, "start")?;
            let goal = checked_cell(&graph, a.goal[0] as i64, a.goal[1] as i64, k + 1, "goal")?;
            agents.push(AgentTask { start, goal });
        }
        Ok((
            graph,
            Scenario {
                map_name: String::from("inline"),
                agents,
            },
        ))
    }
}
