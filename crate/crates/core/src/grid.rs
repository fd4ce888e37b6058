//! Lattice topologies and the sparse, unbounded grid shared by the automaton,
//! agent and complexity modules.
//!
//! A [`Grid`] stores only non-dead cells, so the lattice extends without bound
//! in every direction. Square lattices use `(x, y)` offsets with `y` growing
//! downwards (row order, matching pattern files); hexagonal lattices reuse the
//! same pair as axial `(q, r)` coordinates.

use std::collections::BTreeMap;
use std::fmt;
use std::ops::{Add, Neg, Sub};

use serde::{Deserialize, Serialize};

/// Cell state: `0` is dead, `1..states` are live colors.
pub type CellState = u8;

pub const DEAD: CellState = 0;

/// Integer lattice coordinate. On a hexagonal lattice `x` is the axial `q`
/// and `y` the axial `r`.
#[derive(
    Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Default, Serialize, Deserialize,
)]
pub struct Coord {
    pub x: i64,
    pub y: i64,
}

impl Coord {
    pub const ORIGIN: Coord = Coord { x: 0, y: 0 };

    pub const fn new(x: i64, y: i64) -> Self {
        Coord { x, y }
    }
}

impl From<(i64, i64)> for Coord {
    fn from((x, y): (i64, i64)) -> Self {
        Coord { x, y }
    }
}

impl Add for Coord {
    type Output = Coord;
    fn add(self, o: Coord) -> Coord {
        Coord::new(self.x + o.x, self.y + o.y)
    }
}

impl Sub for Coord {
    type Output = Coord;
    fn sub(self, o: Coord) -> Coord {
        Coord::new(self.x - o.x, self.y - o.y)
    }
}

impl Neg for Coord {
    type Output = Coord;
    fn neg(self) -> Coord {
        Coord::new(-self.x, -self.y)
    }
}

impl fmt::Display for Coord {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({},{})", self.x, self.y)
    }
}

/// Moore neighborhood offsets in row-major order.
const MOORE: [Coord; 8] = [
    Coord::new(-1, -1),
    Coord::new(0, -1),
    Coord::new(1, -1),
    Coord::new(-1, 0),
    Coord::new(1, 0),
    Coord::new(-1, 1),
    Coord::new(0, 1),
    Coord::new(1, 1),
];

/// Axial honeycomb offsets, clockwise starting from `(+1, 0)`.
const HEX: [Coord; 6] = [
    Coord::new(1, 0),
    Coord::new(1, -1),
    Coord::new(0, -1),
    Coord::new(-1, 0),
    Coord::new(-1, 1),
    Coord::new(0, 1),
];

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize, Default)]
#[serde(rename_all = "lowercase")]
pub enum Topology {
    /// Square cells with the eight-cell Moore neighborhood.
    #[default]
    #[serde(alias = "square-moore")]
    Square,
    /// Axial hexagonal cells with six neighbors.
    #[serde(alias = "hex")]
    Hexagonal,
}

impl Topology {
    pub const fn degree(self) -> usize {
        match self {
            Topology::Square => 8,
            Topology::Hexagonal => 6,
        }
    }

    /// Neighbor offsets in the fixed documented order.
    pub const fn offsets(self) -> &'static [Coord] {
        match self {
            Topology::Square => &MOORE,
            Topology::Hexagonal => &HEX,
        }
    }
}

impl fmt::Display for Topology {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Topology::Square => f.write_str("square"),
            Topology::Hexagonal => f.write_str("hex"),
        }
    }
}

impl std::str::FromStr for Topology {
    type Err = String;
    fn from_str(s: &str) -> Result<Self, String> {
        match s {
            "square" | "square-moore" | "moore" => Ok(Topology::Square),
            "hex" | "hexagonal" => Ok(Topology::Hexagonal),
            other => Err(format!(
                "unknown topology `{other}` (expected square or hex)"
            )),
        }
    }
}

/// The neighbors of `c`, exactly `t.degree()` of them, in fixed order:
/// row-major for square lattices, clockwise from `(+1,0)` for hexagonal ones.
pub fn neighbors(c: Coord, t: Topology) -> impl ExactSizeIterator<Item = Coord> {
    t.offsets().iter().map(move |&d| c + d)
}

/// Inclusive bounding box of the live cells.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct BoundingBox {
    pub min: Coord,
    pub max: Coord,
}

impl BoundingBox {
    pub fn width(&self) -> u64 {
        (self.max.x - self.min.x) as u64 + 1
    }

    pub fn height(&self) -> u64 {
        (self.max.y - self.min.y) as u64 + 1
    }
}

/// Sparse grid on an unbounded lattice. Only non-dead cells are stored.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Default)]
pub struct Grid {
    topology: Topology,
    cells: BTreeMap<Coord, CellState>,
}

impl Grid {
    pub fn new(topology: Topology) -> Self {
        Grid {
            topology,
            cells: BTreeMap::new(),
        }
    }

    /// Builds a grid from `(coordinate, state)` pairs; dead entries are dropped
    /// and later duplicates overwrite earlier ones.
    pub fn from_cells<I>(topology: Topology, cells: I) -> Self
    where
        I: IntoIterator<Item = (Coord, CellState)>,
    {
        let mut g = Grid::new(topology);
        for (c, s) in cells {
            g.set(c, s);
        }
        g
    }

    /// Builds a two-state grid with every listed coordinate alive.
    pub fn from_live<I, C>(topology: Topology, live: I) -> Self
    where
        I: IntoIterator<Item = C>,
        C: Into<Coord>,
    {
        Grid::from_cells(topology, live.into_iter().map(|c| (c.into(), 1)))
    }

    pub fn topology(&self) -> Topology {
        self.topology
    }

    /// Reinterprets the stored coordinates under a different topology.
    pub fn with_topology(mut self, topology: Topology) -> Self {
        self.topology = topology;
        self
    }

    pub fn get(&self, c: Coord) -> CellState {
        self.cells.get(&c).copied().unwrap_or(DEAD)
    }

    pub fn is_alive(&self, c: Coord) -> bool {
        self.cells.contains_key(&c)
    }

    /// Sets a cell; writing [`DEAD`] removes it.
    pub fn set(&mut self, c: Coord, state: CellState) {
        if state == DEAD {
            self.cells.remove(&c);
        } else {
            self.cells.insert(c, state);
        }
    }

    pub fn population(&self) -> usize {
        self.cells.len()
    }

    pub fn is_empty(&self) -> bool {
        self.cells.is_empty()
    }

    /// Live cells in coordinate order (by `x`, then `y`).
    pub fn iter(&self) -> impl Iterator<Item = (Coord, CellState)> + '_ {
        self.cells.iter().map(|(&c, &s)| (c, s))
    }

    pub fn max_state(&self) -> CellState {
        self.cells.values().copied().max().unwrap_or(DEAD)
    }

    /// `None` for the empty grid.
    pub fn bounding_box(&self) -> Option<BoundingBox> {
        let mut it = self.cells.keys();
        let first = *it.next()?;
        let (mut min, mut max) = (first, first);
        for c in it {
            min.x = min.x.min(c.x);
            min.y = min.y.min(c.y);
            max.x = max.x.max(c.x);
            max.y = max.y.max(c.y);
        }
        Some(BoundingBox { min, max })
    }

    pub fn translate(&self, d: Coord) -> Grid {
        Grid {
            topology: self.topology,
            cells: self.cells.iter().map(|(&c, &s)| (c + d, s)).collect(),
        }
    }

    /// Shifts the grid so its bounding box starts at the origin.
    pub fn canonicalize(&self) -> Grid {
        match self.bounding_box() {
            Some(bb) => self.translate(-bb.min),
            None => self.clone(),
        }
    }
}

pub fn translate(g: &Grid, d: Coord) -> Grid {
    g.translate(d)
}

pub fn canonicalize(g: &Grid) -> Grid {
    g.canonicalize()
}
