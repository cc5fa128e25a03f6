//! Sensor-field generation, battery ledger, depth statistics, and the
//! lifetime upper bound κ·d_R.

use std::collections::BTreeMap;

use rand_chacha::ChaCha8Rng;
use rand_core::SeedableRng;

use crate::geometry::{Disk, Point, GEOM_EPS};
use crate::rng::{mix64, poisson_inverse, unit_f64};

/// Sampling resolution used by [`lifetime_upper_bound`].
pub const DEFAULT_DEPTH_RESOLUTION: f64 = 0.1;

/// Batteries below this are treated as depleted everywhere.
pub const DEPLETED_EPS: f64 = 1e-9;

/// Sensing radius; uniform across the whole system.
pub const SENSING_RADIUS: f64 = 1.0;

#[derive(Clone, Debug)]
pub struct Sensor {
    pub id: usize,
    pub pos: Point,
    /// Remaining battery in [0, 1]; only ever decreases during a run.
    pub battery: f64,
}

#[derive(Clone, Debug)]
pub struct SensorField {
    pub region_side: f64,
    pub sensors: Vec<Sensor>,
    pub rng_seed: u64,
}

impl SensorField {
    /// Builds a field from explicit positions with fresh (1.0) batteries.
    pub fn from_positions(region_side: f64, positions: &[(f64, f64)]) -> Self {
        let sensors = positions
            .iter()
            .enumerate()
            .map(|(id, &(x, y))| Sensor {
                id,
                pos: Point::new(x, y),
                battery: 1.0,
            })
            .collect();
        SensorField {
            region_side,
            sensors,
            rng_seed: 0,
        }
    }

    pub fn len(&self) -> usize {
        self.sensors.len()
    }

    pub fn is_empty(&self) -> bool {
        self.sensors.is_empty()
    }

    pub fn battery(&self, id: usize) -> f64 {
        self.sensors[id].battery
    }

    /// Setup helper for tests and file loading; scheduled runs mutate
    /// batteries only through the activation operations.
    pub fn set_battery(&mut self, id: usize, value: f64) {
        debug_assert!((0.0..=1.0).contains(&value));
        self.sensors[id].battery = value;
    }

    /// Subtracts activation time from one sensor, clamping float dust at 0.
    pub(crate) fn drain(&mut self, id: usize, delta: f64) {
        debug_assert!(delta >= 0.0);
        let b = &mut self.sensors[id].battery;
        *b -= delta;
        if *b < 0.0 {
            debug_assert!(*b > -1e-9, "battery over-drained: {}", *b);
            *b = 0.0;
        }
    }

    /// Sensing disks in id order.
    pub fn disks(&self) -> Vec<Disk> {
        self.sensors
            .iter()
            .map(|s| Disk::new(s.pos, SENSING_RADIUS))
            .collect()
    }
}

/// Generates a field by dividing [0, L]^2 into 1x1 cells and drawing a
/// Poisson(intensity) count with uniform positions inside each cell. Each
/// cell gets its own substream keyed by (seed, cell), so the result is
/// independent of cell iteration order.
pub fn generate_field(region_side: f64, intensity: f64, seed: u64) -> SensorField {
    assert!(region_side > 0.0, "region side must be positive");
    assert!(intensity > 0.0, "intensity must be positive");
    let cells = region_side.ceil() as u64;
    let mut sensors = Vec::new();
    for cy in 0..cells {
        for cx in 0..cells {
            let mut rng = ChaCha8Rng::seed_from_u64(mix64(&[seed, cx, cy]));
            let count = poisson_inverse(intensity, unit_f64(&mut rng));
            for _ in 0..count {
                let x = cx as f64 + unit_f64(&mut rng);
                let y = cy as f64 + unit_f64(&mut rng);
                // Edge cells may extend past L; rejected draws keep the
                // process Poisson on the clipped region.
                if x <= region_side && y <= region_side {
                    sensors.push(Sensor {
                        id: sensors.len(),
                        pos: Point::new(x, y),
                        battery: 1.0,
                    });
                }
            }
        }
    }
    SensorField {
        region_side,
        sensors,
        rng_seed: seed,
    }
}

#[derive(Clone, Debug)]
pub struct DepthReport {
    /// d_R: maximum number of sensors covering any sampled point.
    pub max_depth: u32,
    pub resolution: f64,
    /// depth -> number of lattice samples at that depth.
    pub histogram: BTreeMap<u32, u64>,
}

/// Samples depth on a lattice of the given resolution plus every sensor
/// center, so d_R always dominates the depth at each sensor's own center.
pub fn region_depth(field: &SensorField, resolution: f64) -> DepthReport {
    assert!(resolution > 0.0);
    let side = field.region_side;
    let n = (side / resolution + GEOM_EPS).floor() as usize + 1;
    let mut counts = vec![0u32; n * n];
    let r = SENSING_RADIUS + GEOM_EPS;
    let r2 = r * r;
    for s in &field.sensors {
        let (cx, cy) = (s.pos.x, s.pos.y);
        let j_lo = ((cy - r) / resolution).floor().max(0.0) as usize;
        let j_hi = (((cy + r) / resolution).ceil() as usize).min(n - 1);
        for j in j_lo..=j_hi {
            let y = j as f64 * resolution;
            let dy = y - cy;
            if dy.abs() > r {
                continue;
            }
            let w = (r2 - dy * dy).max(0.0).sqrt();
            let i_lo = ((cx - w) / resolution - 1.0).floor().max(0.0) as usize;
            let i_hi = (((cx + w) / resolution + 1.0).ceil() as usize).min(n - 1);
            for i in i_lo..=i_hi {
                let x = i as f64 * resolution;
                let dx = x - cx;
                if dx * dx + dy * dy <= r2 {
                    counts[j * n + i] += 1;
                }
            }
        }
    }
    let mut histogram = BTreeMap::new();
    let mut max_depth = 0u32;
    for &c in &counts {
        *histogram.entry(c).or_insert(0u64) += 1;
        max_depth = max_depth.max(c);
    }
    // sensor centers as extra samples (contribute to the max only)
    for s in &field.sensors {
        let mut depth = 0u32;
        for t in &field.sensors {
            if s.pos.dist2(t.pos) <= r2 {
                depth += 1;
            }
        }
        max_depth = max_depth.max(depth);
    }
    DepthReport {
        max_depth,
        resolution,
        histogram,
    }
}

/// Theorem-1 upper bound on achievable lifetime: κ·d_R.
pub fn lifetime_upper_bound(field: &SensorField, kappa: f64) -> f64 {
    debug_assert!(kappa > 1.0);
    if field.is_empty() {
        return 0.0;
    }
    let report = region_depth(field, DEFAULT_DEPTH_RESOLUTION);
    kappa * report.max_depth as f64
}
