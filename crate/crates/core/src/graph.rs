//! Four-connected grid graphs, per-action edge costs and paths.

use serde::{Deserialize, Serialize};

use crate::cost::CostVector;
use crate::error::ModelError;

/// Cell id, `row * width + column`.
pub type Vertex = u32;
/// Discrete time step.
pub type Time = u32;

/// The five actions available at every cell. `Wait` is the self-loop.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Direction {
    Wait,
    North,
    East,
    South,
    West,
}

impl Direction {
    pub const ALL: [Direction; 5] = [
        Direction::Wait,
        Direction::North,
        Direction::East,
        Direction::South,
        Direction::West,
    ];

    fn index(self) -> usize {
        self as usize
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct GridGraph {
    width: u32,
    height: u32,
    passable: Vec<bool>,
}

impl GridGraph {
    /// `passable` is row-major with `width * height` entries.
    pub fn new(width: u32, height: u32, passable: Vec<bool>) -> Self {
        assert_eq!(passable.len(), (width * height) as usize);
        GridGraph {
            width,
            height,
            passable,
        }
    }

    pub fn open(width: u32, height: u32) -> Self {
        Self::new(width, height, vec![true; (width * height) as usize])
    }

    pub fn width(&self) -> u32 {
        self.width
    }

    pub fn height(&self) -> u32 {
        self.height
    }

    pub fn num_cells(&self) -> usize {
        self.passable.len()
    }

    pub fn cell(&self, x: u32, y: u32) -> Vertex {
        y * self.width + x
    }

    pub fn coords(&self, v: Vertex) -> (u32, u32) {
        (v % self.width, v / self.width)
    }

    pub fn in_bounds(&self, x: i64, y: i64) -> bool {
        x >= 0 && y >= 0 && x < self.width as i64 && y < self.height as i64
    }

    pub fn is_passable(&self, v: Vertex) -> bool {
        self.passable.get(v as usize).copied().unwrap_or(false)
    }

    /// Passable cells in row-major order.
    pub fn vertices(&self) -> impl Iterator<Item = Vertex> + '_ {
        (0..self.passable.len() as Vertex).filter(move |&v| self.passable[v as usize])
    }

    pub fn num_vertices(&self) -> usize {
        self.passable.iter().filter(|&&p| p).count()
    }

    /// Target of `dir` from `v`, if it is a passable cell.
    pub fn step(&self, v: Vertex, dir: Direction) -> Option<Vertex> {
        if !self.is_passable(v) {
            return None;
        }
        let (x, y) = self.coords(v);
        let (x, y) = (x as i64, y as i64);
        let (nx, ny) = match dir {
            Direction::Wait => (x, y),
            Direction::North => (x, y - 1),
            Direction::East => (x + 1, y),
            Direction::South => (x, y + 1),
            Direction::West => (x - 1, y),
        };
        if !self.in_bounds(nx, ny) {
            return None;
        }
        let w = self.cell(nx as u32, ny as u32);
        self.is_passable(w).then_some(w)
    }

    /// Passable 4-neighbours of `v` (no self-loop).
    pub fn neighbors(&self, v: Vertex) -> impl Iterator<Item = Vertex> + '_ {
        Direction::ALL[1..]
            .iter()
            .filter_map(move |&d| self.step(v, d))
    }

    /// Wait plus the four moves, in [`Direction::ALL`] order.
    pub fn successors(&self, v: Vertex) -> impl Iterator<Item = Vertex> + '_ {
        Direction::ALL.iter().filter_map(move |&d| self.step(v, d))
    }

    pub fn direction(&self, from: Vertex, to: Vertex) -> Option<Direction> {
        if !self.is_passable(from) || !self.is_passable(to) {
            return None;
        }
        let (fx, fy) = self.coords(from);
        let (tx, ty) = self.coords(to);
        match (tx as i64 - fx as i64, ty as i64 - fy as i64) {
            (0, 0) => Some(Direction::Wait),
            (0, -1) => Some(Direction::North),
            (1, 0) => Some(Direction::East),
            (0, 1) => Some(Direction::South),
            (-1, 0) => Some(Direction::West),
            _ => None,
        }
    }

    pub fn num_move_edges(&self) -> usize {
        self.vertices()
            .map(|v| {
                [Direction::East, Direction::South]
                    .iter()
                    .filter(|&&d| self.step(v, d).is_some())
                    .count()
            })
            .sum()
    }
}

/// Cost of every action (wait or move) available in a grid.
///
/// Costs are stored per outgoing action, so direction-dependent models are
/// representable; undirected models simply write the same vector twice.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct EdgeCosts {
    graph: GridGraph,
    objectives: usize,
    table: Vec<Option<CostVector>>,
}

impl EdgeCosts {
    /// Builds a table by calling `cost(from, to)` for every action of `graph`.
    pub fn from_fn(
        graph: &GridGraph,
        objectives: usize,
        mut cost: impl FnMut(Vertex, Vertex) -> CostVector,
    ) -> Self {
        let mut table = vec![None; graph.num_cells() * 5];
        for v in graph.vertices() {
            for d in Direction::ALL {
                if let Some(w) = graph.step(v, d) {
                    let c = cost(v, w);
                    assert_eq!(c.len(), objectives);
                    table[v as usize * 5 + d.index()] = Some(c);
                }
            }
        }
        EdgeCosts {
            graph: graph.clone(),
            objectives,
            table,
        }
    }

    pub fn uniform(graph: &GridGraph, cost: CostVector) -> Self {
        let m = cost.len();
        Self::from_fn(graph, m, |_, _| cost.clone())
    }

    pub fn graph(&self) -> &GridGraph {
        &self.graph
    }

    pub fn objectives(&self) -> usize {
        self.objectives
    }

    /// Cost of the action `from -> to`, or `None` when the two cells are not
    /// adjacent (a self-loop is always adjacent for a passable cell).
    #[inline]
    pub fn cost(&self, from: Vertex, to: Vertex) -> Option<&CostVector> {
        let d = self.graph.direction(from, to)?;
        self.table[from as usize * 5 + d.index()].as_ref()
    }

    /// Cost of taking `dir` from `from`.
    #[inline]
    pub fn cost_dir(&self, from: Vertex, dir: Direction) -> Option<&CostVector> {
        self.table[from as usize * 5 + dir.index()].as_ref()
    }

    pub fn wait_cost(&self, v: Vertex) -> &CostVector {
        self.table[v as usize * 5]
            .as_ref()
            .expect("wait cost requested for a blocked cell")
    }

    /// Overwrites the cost of one action.
    pub fn set(&mut self, from: Vertex, to: Vertex, cost: CostVector) {
        assert_eq!(cost.len(), self.objectives);
        let d = self
            .graph
            .direction(from, to)
            .expect("set() called on a non-edge");
        self.table[from as usize * 5 + d.index()] = Some(cost);
    }
}

/// A timed walk: `vertices[t]` is the position at time `t`, starting at 0.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(transparent)]
pub struct Path(pub Vec<Vertex>);

impl Path {
    pub fn new(vertices: Vec<Vertex>) -> Self {
        assert!(!vertices.is_empty(), "a path visits at least one vertex");
        Path(vertices)
    }

    pub fn vertices(&self) -> &[Vertex] {
        &self.0
    }

    pub fn start(&self) -> Vertex {
        self.0[0]
    }

    pub fn goal(&self) -> Vertex {
        *self.0.last().unwrap()
    }

    pub fn arrival_time(&self) -> Time {
        (self.0.len() - 1) as Time
    }

    /// Position at `t`, holding the last vertex after arrival.
    pub fn at(&self, t: Time) -> Vertex {
        self.0
            .get(t as usize)
            .copied()
            .unwrap_or_else(|| self.goal())
    }
}

/// Sum of the action costs along `path`, waits included.
pub fn path_cost(path: &Path, costs: &EdgeCosts) -> Result<CostVector, ModelError> {
    let mut total = CostVector::zero(costs.objectives());
    for (step, pair) in path.0.windows(2).enumerate() {
        let c = costs
            .cost(pair[0], pair[1])
            .ok_or(ModelError::MalformedPath {
                step,
                from: pair[0],
                to: pair[1],
            })?;
        total += c;
    }
    Ok(total)
}

/// One path per agent, indexed by agent id.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(transparent)]
pub struct JointPath(pub Vec<Path>);

impl JointPath {
    pub fn paths(&self) -> &[Path] {
        &self.0
    }

    pub fn num_agents(&self) -> usize {
        self.0.len()
    }

    /// Componentwise sum of the individual path costs.
    pub fn cost(&self, costs: &EdgeCosts) -> Result<CostVector, ModelError> {
        let mut total = CostVector::zero(costs.objectives());
        for p in &self.0 {
            total += &path_cost(p, costs)?;
        }
        Ok(total)
    }

    pub fn makespan(&self) -> Time {
        self.0.iter().map(Path::arrival_time).max().unwrap_or(0)
    }
}
