//! Exact geometry of random cell samples, Monte Carlo estimation of the
//! coverage probabilities, and a rasterizing brute-force oracle.
//!
//! A cell with offset `x` occupies `[x_j - 1/2, x_j + 1/2]` on axis `j`; the
//! query cube is `[-1/2, 1/2]^d`.

use num_traits::ToPrimitive;
use rand::Rng;
use serde::Serialize;

use crate::error::{domain, Error, Result};
use crate::exec::Exec;
use crate::model::binomial;
use crate::seed::{purpose_key, unit_rng, Purpose};
use crate::sum::{CompensatedSum, Moments};

/// Largest number of cells the subset enumeration accepts.
pub const MAX_CELLS: usize = 20;

/// Largest raster size accepted by [`raster_oracle`].
pub const MAX_RASTER_POINTS: u64 = 1 << 28;

/// Center offset of one unit cell containing the origin.
#[derive(Debug, Clone, PartialEq)]
pub struct CellOffset {
    offsets: Vec<f64>,
}

impl CellOffset {
    pub fn new(offsets: Vec<f64>) -> Result<Self> {
        if offsets.is_empty() {
            return domain("cell offset needs at least one dimension");
        }
        if let Some(x) = offsets.iter().find(|x| !(-0.5..=0.5).contains(*x)) {
            return domain(format!("offset component {x} outside [-1/2, 1/2]"));
        }
        Ok(CellOffset { offsets })
    }

    pub fn offsets(&self) -> &[f64] {
        &self.offsets
    }

    pub fn dim(&self) -> usize {
        self.offsets.len()
    }

    /// Whether the cell covers `p`, using half-open bounds `[x - 1/2, x + 1/2)`.
    pub fn covers(&self, p: &[f64]) -> bool {
        self.offsets
            .iter()
            .zip(p)
            .all(|(&x, &p)| x - 0.5 <= p && p < x + 0.5)
    }
}

/// The `m` cells of one trial.
#[derive(Debug, Clone, PartialEq)]
pub struct CellSample {
    cells: Vec<CellOffset>,
}

impl CellSample {
    pub fn new(cells: Vec<CellOffset>) -> Result<Self> {
        if cells.is_empty() || cells.len() > MAX_CELLS {
            return Err(Error::Capacity(format!(
                "a cell sample holds 1..={MAX_CELLS} cells, got {}",
                cells.len()
            )));
        }
        let d = cells[0].dim();
        if cells.iter().any(|c| c.dim() != d) {
            return domain("all cells of a sample must share one dimensionality");
        }
        Ok(CellSample { cells })
    }

    /// Builds a sample from rows of offsets.
    pub fn from_offsets(rows: &[&[f64]]) -> Result<Self> {
        let cells = rows
            .iter()
            .map(|r| CellOffset::new(r.to_vec()))
            .collect::<Result<_>>()?;
        CellSample::new(cells)
    }

    pub fn cells(&self) -> &[CellOffset] {
        &self.cells
    }

    pub fn m(&self) -> usize {
        self.cells.len()
    }

    pub fn dim(&self) -> usize {
        self.cells[0].dim()
    }
}

/// Draws `m` cells with every offset component uniform on `[-1/2, 1/2]`.
pub fn sample_cells<R: Rng + ?Sized>(m: usize, d: usize, rng: &mut R) -> Result<CellSample> {
    if m == 0 || m > MAX_CELLS {
        return domain(format!("m must be in 1..={MAX_CELLS}, got {m}"));
    }
    if d == 0 {
        return domain("dimension d must be at least 1");
    }
    let cells = (0..m)
        .map(|_| CellOffset {
            offsets: (0..d).map(|_| rng.random::<f64>() - 0.5).collect(),
        })
        .collect();
    Ok(CellSample { cells })
}

#[inline]
fn axis_length(min_offset: f64, max_offset: f64) -> f64 {
    let upper = (min_offset + 0.5).min(0.5);
    let lower = (max_offset - 0.5).max(-0.5);
    (upper - lower).max(0.0)
}

/// Volume of the intersection of the chosen cells with the query cube.
pub fn intersection_volume(sample: &CellSample, subset: &[usize]) -> Result<f64> {
    if subset.is_empty() {
        return domain("intersection of an empty subset is undefined");
    }
    if let Some(&i) = subset.iter().find(|&&i| i >= sample.m()) {
        return domain(format!("cell index {i} out of range for m={}", sample.m()));
    }
    let mut volume = 1.0;
    for axis in 0..sample.dim() {
        let (mut lo, mut hi) = (f64::INFINITY, f64::NEG_INFINITY);
        for &i in subset {
            let x = sample.cells[i].offsets[axis];
            lo = lo.min(x);
            hi = hi.max(x);
        }
        volume *= axis_length(lo, hi);
    }
    Ok(volume)
}

/// `S_j` for `j = 1..=m`: the sum of intersection volumes over all subsets of
/// size `j`. Entry `j - 1` of the result holds `S_j`.
///
/// Subsets are enumerated depth-first, extending the running per-axis min and
/// max offsets; a branch whose intersection is already empty is skipped since
/// every superset is empty too.
pub fn intersection_sums(sample: &CellSample) -> Vec<f64> {
    let m = sample.m();
    let d = sample.dim();
    let mut sums = vec![CompensatedSum::new(); m];
    // bounds[depth] holds (min, max) per axis for the current prefix subset
    let mut bounds = vec![(0.0f64, 0.0f64); (m + 1) * d];
    for b in &mut bounds[..d] {
        *b = (f64::INFINITY, f64::NEG_INFINITY);
    }

    fn descend(
        sample: &CellSample,
        start: usize,
        depth: usize,
        bounds: &mut [(f64, f64)],
        sums: &mut [CompensatedSum],
    ) {
        let d = sample.dim();
        for i in start..sample.m() {
            let (parent, child) = bounds.split_at_mut((depth + 1) * d);
            let parent = &parent[depth * d..];
            let child = &mut child[..d];
            let mut volume = 1.0;
            for axis in 0..d {
                let x = sample.cells[i].offsets[axis];
                let (lo, hi) = parent[axis];
                let b = (lo.min(x), hi.max(x));
                child[axis] = b;
                volume *= axis_length(b.0, b.1);
            }
            if volume > 0.0 {
                sums[depth].add(volume);
                descend(sample, i + 1, depth + 1, bounds, sums);
            }
        }
    }

    descend(sample, 0, 0, &mut bounds, &mut sums);
    sums.iter().map(CompensatedSum::value).collect()
}

fn at_least_from_sums(sums: &[f64], ell: usize) -> f64 {
    let mut acc = CompensatedSum::new();
    for j in ell..=sums.len() {
        let coeff = binomial(j as u64 - 1, ell as u64 - 1)
            .to_f64()
            .unwrap_or(f64::INFINITY);
        let term = coeff * sums[j - 1];
        acc.add(if (j - ell).is_multiple_of(2) {
            term
        } else {
            -term
        });
    }
    acc.value().clamp(0.0, 1.0)
}

/// Volume of the query cube covered by the union of all cells.
pub fn union_volume(sample: &CellSample) -> Result<f64> {
    if sample.m() > MAX_CELLS {
        return Err(Error::Capacity(format!("union of {} cells", sample.m())));
    }
    Ok(at_least_from_sums(&intersection_sums(sample), 1))
}

/// Volume of the query cube covered by at least `ell` cells.
pub fn coverage_at_least(sample: &CellSample, ell: usize) -> Result<f64> {
    if ell == 0 || ell > sample.m() {
        return domain(format!(
            "need 1 <= ell <= m, got ell={ell}, m={}",
            sample.m()
        ));
    }
    Ok(at_least_from_sums(&intersection_sums(sample), ell))
}

/// Volume covered by exactly `ell` cells.
pub fn coverage_exactly(sample: &CellSample, ell: usize) -> Result<f64> {
    let upper = if ell == sample.m() {
        0.0
    } else {
        coverage_at_least(sample, ell + 1)?
    };
    Ok(coverage_at_least(sample, ell)? - upper)
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct McEstimate {
    pub mean: f64,
    pub stderr: f64,
    pub samples: u64,
    pub seed: u64,
}

impl McEstimate {
    /// `|mean - exact| / stderr`, with a zero-stderr estimate scoring 0 on an
    /// exact hit and infinity otherwise.
    pub fn z_score(&self, exact: f64) -> f64 {
        let diff = (self.mean - exact).abs();
        if self.stderr > 0.0 {
            diff / self.stderr
        } else if diff == 0.0 {
            0.0
        } else {
            f64::INFINITY
        }
    }
}

/// Monte Carlo estimate of `p(m, ℓ, d)`.
///
/// Trial `i` draws its cells from stream `i` of the seed, so the estimate is
/// reproducible for any worker count.
pub fn mc_estimate_p(
    m: usize,
    ell: usize,
    d: usize,
    samples: u64,
    seed: u64,
    exec: Exec,
) -> Result<McEstimate> {
    if samples == 0 {
        return domain("samples must be positive");
    }
    if ell == 0 || ell > m || m > MAX_CELLS {
        return domain(format!(
            "need 1 <= ell <= m <= {MAX_CELLS}, got ell={ell}, m={m}"
        ));
    }
    if d == 0 {
        return domain("dimension d must be at least 1");
    }
    let key = purpose_key(seed, Purpose::CellSample, ((m as u64) << 32) | d as u64);
    let partials = exec.map_chunks(samples as usize, |range| {
        let mut moments = Moments::default();
        for i in range {
            let mut rng = unit_rng(key, i as u64);
            let sample = sample_cells(m, d, &mut rng).expect("validated above");
            moments.push(at_least_from_sums(&intersection_sums(&sample), ell));
        }
        moments
    });
    let mut total = Moments::default();
    for p in &partials {
        total.merge(p);
    }
    Ok(McEstimate {
        mean: total.mean(),
        stderr: total.stderr(),
        samples,
        seed,
    })
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct RasterEstimate {
    pub fraction: f64,
    /// `m · d / resolution`.
    pub error_bound: f64,
}

/// Fraction of midpoint-raster points of the query cube covered by at least
/// `ell` cells.
pub fn raster_oracle(sample: &CellSample, ell: usize, resolution: usize) -> Result<RasterEstimate> {
    raster_oracle_with(sample, ell, resolution, Exec::default())
}

pub fn raster_oracle_with(
    sample: &CellSample,
    ell: usize,
    resolution: usize,
    exec: Exec,
) -> Result<RasterEstimate> {
    let m = sample.m();
    if ell == 0 || ell > m {
        return domain(format!("need 1 <= ell <= m, got ell={ell}, m={m}"));
    }
    let counts = raster_coverage_counts(sample, resolution, exec)?;
    let total: u64 = counts.iter().sum();
    let hits: u64 = counts[ell..].iter().sum();
    Ok(RasterEstimate {
        fraction: hits as f64 / total as f64,
        error_bound: (m * sample.dim()) as f64 / resolution as f64,
    })
}

/// Histogram of raster points by the number of cells covering them: entry `k`
/// counts midpoints covered by exactly `k` cells. Points are the midpoints of
/// a `resolution^d` grid on the query cube; cells are half-open.
pub fn raster_coverage_counts(
    sample: &CellSample,
    resolution: usize,
    exec: Exec,
) -> Result<Vec<u64>> {
    let (m, d) = (sample.m(), sample.dim());
    if resolution == 0 {
        return domain("resolution must be positive");
    }
    let total = (resolution as u64)
        .checked_pow(d as u32)
        .filter(|&t| t <= MAX_RASTER_POINTS);
    let total = match (d <= 3, total) {
        (true, Some(t)) => t,
        _ => {
            return Err(Error::Capacity(format!(
                "raster of {resolution}^{d} points (limit d <= 3, {MAX_RASTER_POINTS} points)"
            )))
        }
    };
    // masks[axis * resolution + k]: bit c set when cell c covers midpoint k on that axis
    let mut masks = vec![0u32; d * resolution];
    for (c, cell) in sample.cells.iter().enumerate() {
        for (axis, &x) in cell.offsets.iter().enumerate() {
            for k in 0..resolution {
                let p = -0.5 + (k as f64 + 0.5) / resolution as f64;
                if x - 0.5 <= p && p < x + 0.5 {
                    masks[axis * resolution + k] |= 1 << c;
                }
            }
        }
    }
    let all = (1u32 << m) - 1;
    let partials = exec.map_chunks(total as usize, |range| {
        let mut hist = vec![0u64; m + 1];
        for flat in range {
            let mut rest = flat;
            let mut mask = all;
            for axis in 0..d {
                mask &= masks[axis * resolution + rest % resolution];
                rest /= resolution;
            }
            hist[mask.count_ones() as usize] += 1;
        }
        hist
    });
    let mut hist = vec![0u64; m + 1];
    for p in partials {
        for (h, v) in hist.iter_mut().zip(p) {
            *h += v;
        }
    }
    Ok(hist)
}
