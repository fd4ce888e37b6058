//! Helpers shared by the integration tests.
#![allow(dead_code)]

use complexkit::{Coord, Grid, Topology};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

/// `w`×`h` random soup with its top-left corner at the origin.
pub fn soup(seed: u64, w: i64, h: i64, density: f64) -> Grid {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut live = Vec::new();
    for y in 0..h {
        for x in 0..w {
            if rng.gen_bool(density) {
                live.push(Coord::new(x, y));
            }
        }
    }
    Grid::from_live(Topology::Square, live)
}

/// Independent B3/S23 engine: a fixed dense array with a dead border,
/// stepped with two buffers. Only the rectangle the pattern can have reached
/// is updated, so the padding must exceed the number of generations.
pub struct DenseLife {
    side: usize,
    pad: i64,
    cur: Vec<u8>,
    next: Vec<u8>,
    /// Inclusive active rectangle in array coordinates.
    lo: usize,
    hi: usize,
}

impl DenseLife {
    pub fn new(g: &Grid, extent: usize, pad: usize) -> Self {
        let side = extent + 2 * pad;
        let mut cur = vec![0u8; side * side];
        for (c, _) in g.iter() {
            let (x, y) = (c.x + pad as i64, c.y + pad as i64);
            assert!((0..side as i64).contains(&x) && (0..side as i64).contains(&y));
            cur[y as usize * side + x as usize] = 1;
        }
        DenseLife {
            side,
            pad: pad as i64,
            next: cur.clone(),
            cur,
            lo: pad,
            hi: pad + extent - 1,
        }
    }

    pub fn step(&mut self) {
        assert!(
            self.lo >= 2 && self.hi + 2 < self.side,
            "pattern reached the border"
        );
        self.lo -= 1;
        self.hi += 1;
        let s = self.side;
        for y in self.lo..=self.hi {
            for x in self.lo..=self.hi {
                let mut n = 0;
                for dy in [-1isize, 0, 1] {
                    for dx in [-1isize, 0, 1] {
                        if dx != 0 || dy != 0 {
                            let yy = (y as isize + dy) as usize;
                            let xx = (x as isize + dx) as usize;
                            n += self.cur[yy * s + xx];
                        }
                    }
                }
                let alive = self.cur[y * s + x] == 1;
                self.next[y * s + x] = u8::from(n == 3 || (alive && n == 2));
            }
        }
        std::mem::swap(&mut self.cur, &mut self.next);
    }

    pub fn to_grid(&self) -> Grid {
        let s = self.side;
        let mut live = Vec::new();
        for y in self.lo..=self.hi {
            for x in self.lo..=self.hi {
                if self.cur[y * s + x] == 1 {
                    live.push(Coord::new(x as i64 - self.pad, y as i64 - self.pad));
                }
            }
        }
        Grid::from_live(Topology::Square, live)
    }
}

pub fn blinker() -> Grid {
    Grid::from_live(Topology::Square, [(0, 1), (1, 1), (2, 1)])
}

pub fn block() -> Grid {
    Grid::from_live(Topology::Square, [(0, 0), (1, 0), (0, 1), (1, 1)])
}

pub fn glider() -> Grid {
    Grid::from_live(Topology::Square, [(1, 0), (2, 1), (0, 2), (1, 2), (2, 2)])
}

/// Random grid of up to `max`×`max` cells placed at an arbitrary offset.
pub fn random_grid<R: Rng>(rng: &mut R, max: i64, states: u8) -> Grid {
    let w = rng.gen_range(1..=max);
    let h = rng.gen_range(1..=max);
    let density = rng.gen_range(0.05..0.9);
    let off = Coord::new(rng.gen_range(-50..50), rng.gen_range(-50..50));
    let mut g = Grid::new(Topology::Square);
    for y in 0..h {
        for x in 0..w {
            if rng.gen_bool(density) {
                g.set(Coord::new(x, y) + off, rng.gen_range(1..=states));
            }
        }
    }
    g
}

/// (fixture, population, canonical RLE, canonical plaintext)
pub const PINNED: &[(&str, usize, &str, &str)] = &[
    ("block.rle", 4, "x = 2, y = 2, rule = B3/S23\n2o$2o!", "OO\nOO\n"),
    ("blinker.cells", 3, "x = 3, y = 1, rule = B3/S23\n3o!", "OOO\n"),
    (
        "glider.rle",
        5,
        "x = 3, y = 3, rule = B3/S23\nbo$2bo$3o!",
        ".O.\n..O\nOOO\n",
    ),
    (
        "gosper_gun.rle",
        36,
        "x = 36, y = 9, rule = B3/S23\n24bo$22bobo$12b2o6b2o12b2o$11bo3bo4b2o12b2o$2o8bo5bo3b2o$2o8bo3bob2o4b\nobo$10bo5bo7bo$11bo3bo$12b2o!",
        "........................O...........\n......................O.O...........\n............OO......OO............OO\n...........O...O....OO............OO\nOO........O.....O...OO..............\nOO........O...O.OO....O.O...........\n..........O.....O.......O...........\n...........O...O....................\n............OO......................\n",
    ),
    (
        "pulsar.cells",
        48,
        "x = 13, y = 13, rule = B3/S23\n2b3o3b3o2$o4bobo4bo$o4bobo4bo$o4bobo4bo$2b3o3b3o2$2b3o3b3o$o4bobo4bo$o\n4bobo4bo$o4bobo4bo2$2b3o3b3o!",
        "..OOO...OOO..\n.............\nO....O.O....O\nO....O.O....O\nO....O.O....O\n..OOO...OOO..\n.............\n..OOO...OOO..\nO....O.O....O\nO....O.O....O\nO....O.O....O\n.............\n..OOO...OOO..\n",
    ),
    (
        "lwss.cells",
        9,
        "x = 5, y = 4, rule = B3/S23\nbo2bo$o$o3bo$4o!",
        ".O..O\nO....\nO...O\nOOOO.\n",
    ),
];
