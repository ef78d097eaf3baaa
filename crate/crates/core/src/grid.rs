//! Multi-table shifted-grid LSH over the unit torus `[0, 1)^d`.
//!
//! Table `t` partitions the torus into `g^d` half-open cells of side `b = 1/g`
//! after translating every point by `shift_t ∈ [0, 1/g)^d`. A query collects
//! the points sharing its cell in at least `ℓ` tables. Because shifts are
//! uniform and the space wraps, the cell around a uniformly placed query has
//! exactly the uniform offset distribution of the coverage model.

use std::collections::HashMap;
use std::io::Read;
use std::path::Path;

use rand::Rng;
use serde::Serialize;

use crate::error::{domain, Error, Result};
use crate::exec::Exec;
use crate::mc::MAX_CELLS;
use crate::model::{p_at_least, to_f64};
use crate::seed::{purpose_key, unit_rng, Purpose};
use crate::sum::Moments;

/// `n` points in `[0, 1)^d`, stored row-major.
#[derive(Debug, Clone, PartialEq)]
pub struct PointSet {
    coords: Vec<f64>,
    d: usize,
}

impl PointSet {
    pub fn new(coords: Vec<f64>, d: usize) -> Result<Self> {
        if d == 0 {
            return domain("dimension d must be at least 1");
        }
        if coords.is_empty() || !coords.len().is_multiple_of(d) {
            return domain(format!(
                "{} coordinates do not form rows of {d}",
                coords.len()
            ));
        }
        if let Some(x) = coords.iter().find(|x| !(0.0..1.0).contains(*x)) {
            return domain(format!("coordinate {x} outside [0, 1)"));
        }
        Ok(PointSet { coords, d })
    }

    pub fn len(&self) -> usize {
        self.coords.len() / self.d
    }

    pub fn is_empty(&self) -> bool {
        self.coords.is_empty()
    }

    pub fn dim(&self) -> usize {
        self.d
    }

    pub fn point(&self, id: usize) -> &[f64] {
        &self.coords[id * self.d..(id + 1) * self.d]
    }

    pub fn iter(&self) -> impl Iterator<Item = &[f64]> {
        self.coords.chunks_exact(self.d)
    }

    /// Translates every point by `offset` modulo 1.
    pub fn translated(&self, offset: &[f64]) -> Result<PointSet> {
        if offset.len() != self.d {
            return domain("offset dimensionality mismatch");
        }
        let coords = self
            .iter()
            .flat_map(|p| p.iter().zip(offset).map(|(x, o)| wrap_unit(x + o)))
            .collect();
        PointSet::new(coords, self.d)
    }
}

/// Reduces `x` into `[0, 1)`.
pub fn wrap_unit(x: f64) -> f64 {
    let r = x.rem_euclid(1.0);
    // rem_euclid can round up to exactly 1.0 for tiny negative inputs
    if r >= 1.0 {
        0.0
    } else {
        r
    }
}

/// I.i.d. uniform points; point `i` is drawn from its own stream.
pub fn generate_uniform(n: usize, d: usize, seed: u64) -> Result<PointSet> {
    generate_uniform_with(n, d, seed, Exec::default())
}

pub fn generate_uniform_with(n: usize, d: usize, seed: u64, exec: Exec) -> Result<PointSet> {
    if n == 0 || d == 0 {
        return domain("need n >= 1 and d >= 1");
    }
    let key = purpose_key(seed, Purpose::Points, d as u64);
    let chunks = exec.map_chunks(n, |range| {
        let mut out = Vec::with_capacity(range.len() * d);
        for i in range {
            let mut rng = unit_rng(key, i as u64);
            out.extend((0..d).map(|_| rng.random::<f64>()));
        }
        out
    });
    PointSet::new(chunks.concat(), d)
}

#[derive(Debug, Clone, PartialEq)]
pub struct LoadedCsv {
    pub points: PointSet,
    /// Values outside `[0, 1)` that were reduced modulo 1.
    pub wrapped_values: usize,
    pub had_header: bool,
}

/// Reads points from a CSV file: one point per row, `d` decimal columns, an
/// optional header line.
pub fn load_csv(path: impl AsRef<Path>) -> Result<LoadedCsv> {
    let file = std::fs::File::open(path)?;
    parse_csv(file)
}

pub fn parse_csv<R: Read>(reader: R) -> Result<LoadedCsv> {
    let mut rdr = csv::ReaderBuilder::new()
        .has_headers(false)
        .flexible(true)
        .trim(csv::Trim::All)
        .from_reader(reader);
    let mut coords = Vec::new();
    let mut d = None;
    let mut wrapped_values = 0;
    let mut had_header = false;
    for (i, record) in rdr.records().enumerate() {
        let row = i + 1;
        let record = record.map_err(|e| Error::Parse {
            row,
            message: e.to_string(),
        })?;
        let parsed: std::result::Result<Vec<f64>, _> =
            record.iter().map(str::parse::<f64>).collect();
        let values = match parsed {
            Ok(v) => v,
            // a first line with no numeric field at all is a header
            Err(_) if row == 1 && record.iter().all(|f| f.parse::<f64>().is_err()) => {
                had_header = true;
                d = Some(record.len());
                continue;
            }
            Err(e) => {
                return Err(Error::Parse {
                    row,
                    message: format!("non-numeric field: {e}"),
                })
            }
        };
        if values.is_empty() || (values.len() == 1 && record.get(0) == Some("")) {
            return Err(Error::Parse {
                row,
                message: "empty row".into(),
            });
        }
        match d {
            None => d = Some(values.len()),
            Some(d) if d != values.len() => {
                return Err(Error::Parse {
                    row,
                    message: format!("expected {d} fields, found {}", values.len()),
                })
            }
            _ => {}
        }
        for x in values {
            if !x.is_finite() {
                return Err(Error::Parse {
                    row,
                    message: format!("non-finite value {x}"),
                });
            }
            if !(0.0..1.0).contains(&x) {
                wrapped_values += 1;
            }
            coords.push(wrap_unit(x));
        }
    }
    let Some(d) = d.filter(|_| !coords.is_empty()) else {
        return Err(Error::Parse {
            row: 0,
            message: "no data rows".into(),
        });
    };
    Ok(LoadedCsv {
        points: PointSet::new(coords, d)?,
        wrapped_values,
        had_header,
    })
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct GridConfig {
    /// Number of tables.
    pub m: usize,
    /// Cells per axis; the cell side is `1/g`.
    pub g: u32,
    pub seed: u64,
}

impl GridConfig {
    pub fn new(m: usize, g: u32, seed: u64) -> Result<Self> {
        if m == 0 || m > MAX_CELLS {
            return domain(format!("m must be in 1..={MAX_CELLS}, got {m}"));
        }
        if g < 2 {
            return domain(format!("g must be at least 2, got {g}"));
        }
        Ok(GridConfig { m, g, seed })
    }

    pub fn cell_side(&self) -> f64 {
        1.0 / self.g as f64
    }
}

/// Mixed-radix packing of a cell coordinate tuple.
type CellKey = u128;

fn pack(cell: impl Iterator<Item = u32>, g: u32) -> CellKey {
    cell.fold(0u128, |acc, c| acc * g as u128 + c as u128)
}

fn cell_key(p: &[f64], shift: &[f64], g: u32) -> CellKey {
    pack(p.iter().zip(shift).map(|(x, s)| cell_coord(*x, *s, g)), g)
}

#[inline]
fn cell_coord(x: f64, shift: f64, g: u32) -> u32 {
    (((x + shift) * g as f64).floor() as i64).rem_euclid(g as i64) as u32
}

#[derive(Debug, Clone)]
pub struct GridIndex {
    config: GridConfig,
    d: usize,
    n: usize,
    shifts: Vec<Vec<f64>>,
    tables: Vec<HashMap<CellKey, Vec<u32>>>,
}

/// Toroidal cell coordinate `floor((p + shift) g) mod g` per axis.
pub fn cell_of(p: &[f64], shift: &[f64], g: u32) -> Vec<u32> {
    p.iter()
        .zip(shift)
        .map(|(x, s)| cell_coord(*x, *s, g))
        .collect()
}

/// Builds `m` tables with independent uniform shifts in `[0, 1/g)^d`.
pub fn build_index(points: &PointSet, config: GridConfig) -> Result<GridIndex> {
    let d = points.dim();
    let key = purpose_key(config.seed, Purpose::GridShift, d as u64);
    let side = config.cell_side();
    let shifts = (0..config.m)
        .map(|t| {
            let mut rng = unit_rng(key, t as u64);
            (0..d).map(|_| rng.random::<f64>() * side).collect()
        })
        .collect();
    build_index_with_shifts(points, config, shifts)
}

/// Builds tables with caller-chosen shifts.
pub fn build_index_with_shifts(
    points: &PointSet,
    config: GridConfig,
    shifts: Vec<Vec<f64>>,
) -> Result<GridIndex> {
    GridConfig::new(config.m, config.g, config.seed)?;
    let d = points.dim();
    if shifts.len() != config.m || shifts.iter().any(|s| s.len() != d) {
        return domain(format!("need {} shift vectors of dimension {d}", config.m));
    }
    if u32::try_from(points.len()).is_err() {
        return Err(Error::Capacity(format!(
            "{} points exceed u32 ids",
            points.len()
        )));
    }
    if (config.g as f64).log2() * d as f64 > 128.0 {
        return Err(Error::Capacity(format!(
            "{}^{d} cells do not fit a 128-bit key",
            config.g
        )));
    }
    let tables = shifts
        .iter()
        .map(|shift| {
            let mut table: HashMap<CellKey, Vec<u32>> = HashMap::new();
            for (id, p) in points.iter().enumerate() {
                table
                    .entry(cell_key(p, shift, config.g))
                    .or_default()
                    .push(id as u32);
            }
            table
        })
        .collect();
    Ok(GridIndex {
        config,
        d,
        n: points.len(),
        shifts,
        tables,
    })
}

impl GridIndex {
    pub fn config(&self) -> &GridConfig {
        &self.config
    }

    pub fn dim(&self) -> usize {
        self.d
    }

    pub fn len(&self) -> usize {
        self.n
    }

    pub fn is_empty(&self) -> bool {
        self.n == 0
    }

    pub fn shifts(&self) -> &[Vec<f64>] {
        &self.shifts
    }

    /// Nonempty buckets of table `t`, as `(cell, ids)`.
    pub fn buckets(&self, t: usize) -> impl Iterator<Item = (Vec<u32>, &[u32])> + '_ {
        let (g, d) = (self.config.g, self.d);
        self.tables[t].iter().map(move |(&k, v)| {
            let mut cell = vec![0u32; d];
            let mut rest = k;
            for c in cell.iter_mut().rev() {
                *c = (rest % g as u128) as u32;
                rest /= g as u128;
            }
            (cell, &v[..])
        })
    }

    /// Ids sharing `q`'s cell in at least `ell` tables, ascending.
    pub fn query_candidates(&self, q: &[f64], ell: usize) -> Result<Vec<usize>> {
        if ell == 0 || ell > self.config.m {
            return domain(format!(
                "need 1 <= ell <= m, got ell={ell}, m={}",
                self.config.m
            ));
        }
        if q.len() != self.d || q.iter().any(|x| !(0.0..1.0).contains(x)) {
            return domain("query must be a point of [0, 1)^d");
        }
        let mut hits: Vec<u32> = Vec::new();
        for (table, shift) in self.tables.iter().zip(&self.shifts) {
            if let Some(ids) = table.get(&cell_key(q, shift, self.config.g)) {
                hits.extend_from_slice(ids);
            }
        }
        hits.sort_unstable();
        let mut out = Vec::new();
        let mut i = 0;
        while i < hits.len() {
            let j = hits[i..]
                .iter()
                .position(|&h| h != hits[i])
                .map_or(hits.len(), |k| i + k);
            if j - i >= ell {
                out.push(hits[i] as usize);
            }
            i = j;
        }
        Ok(out)
    }
}

pub fn query_candidates(index: &GridIndex, q: &[f64], ell: usize) -> Result<Vec<usize>> {
    index.query_candidates(q, ell)
}

/// Signed toroidal difference `p - q` in `[-1/2, 1/2)`.
#[inline]
pub fn torus_delta(p: f64, q: f64) -> f64 {
    let delta = wrap_unit(p - q);
    if delta >= 0.5 {
        delta - 1.0
    } else {
        delta
    }
}

/// Ids within toroidal Chebyshev distance `radius` of `q`, with the upper side
/// open: every axis must satisfy `-radius <= p - q < radius`.
pub fn range_query_bruteforce(points: &PointSet, q: &[f64], radius: f64) -> Result<Vec<usize>> {
    if !(radius > 0.0 && radius < 0.5) {
        return domain(format!("radius must be in (0, 1/2), got {radius}"));
    }
    if q.len() != points.dim() {
        return domain("query dimensionality mismatch");
    }
    Ok(points
        .iter()
        .enumerate()
        .filter(|(_, p)| {
            p.iter().zip(q).all(|(&p, &q)| {
                let delta = torus_delta(p, q);
                -radius <= delta && delta < radius
            })
        })
        .map(|(id, _)| id)
        .collect())
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct RecallReport {
    pub m: usize,
    pub ell: usize,
    pub d: usize,
    pub g: u32,
    pub n: usize,
    pub queries: usize,
    /// Queries whose true range result was nonempty; recall averages over these.
    pub queries_with_neighbors: usize,
    /// Independent shift draws behind the measurement.
    pub index_builds: usize,
    pub mean_recall: f64,
    pub stderr_recall: f64,
    /// Fraction of the whole dataset returned as candidates.
    pub mean_selectivity: f64,
    /// Volume of the query cube, `b^d`; selectivity over this is the candidate
    /// count relative to the expected range-query size.
    pub query_volume: f64,
    /// `p_at_least(m, ℓ, d)` from the closed form.
    pub predicted_recall: f64,
}

fn sorted_overlap(a: &[usize], b: &[usize]) -> usize {
    let (mut i, mut j, mut n) = (0, 0, 0);
    while i < a.len() && j < b.len() {
        match a[i].cmp(&b[j]) {
            std::cmp::Ordering::Less => i += 1,
            std::cmp::Ordering::Greater => j += 1,
            std::cmp::Ordering::Equal => {
                n += 1;
                i += 1;
                j += 1;
            }
        }
    }
    n
}

fn random_query(key: u64, i: usize, d: usize) -> Vec<f64> {
    let mut rng = unit_rng(key, i as u64);
    (0..d).map(|_| rng.random::<f64>()).collect()
}

/// Recall (when the true range result is nonempty) and selectivity of one
/// query.
fn evaluate_query(
    index: &GridIndex,
    points: &PointSet,
    q: &[f64],
    ell: usize,
) -> Result<(Option<f64>, f64)> {
    let radius = index.config().cell_side() / 2.0;
    let candidates = index.query_candidates(q, ell)?;
    let truth = range_query_bruteforce(points, q, radius)?;
    let recall = (!truth.is_empty())
        .then(|| sorted_overlap(&candidates, &truth) as f64 / truth.len() as f64);
    Ok((recall, candidates.len() as f64 / points.len() as f64))
}

#[derive(Default)]
struct BuildTally {
    recall: Moments,
    selectivity: Moments,
}

fn check_recall_args(
    points: &PointSet,
    cfg: &GridConfig,
    n_queries: usize,
    ell: usize,
) -> Result<f64> {
    if n_queries == 0 {
        return domain("n_queries must be positive");
    }
    Ok(to_f64(&p_at_least(
        cfg.m as u32,
        ell as u32,
        points.dim() as u32,
    )?))
}

fn report(
    cfg: &GridConfig,
    points: &PointSet,
    ell: usize,
    n_queries: usize,
    predicted: f64,
    tallies: &[BuildTally],
) -> RecallReport {
    let mut recall = Moments::default();
    let mut selectivity = Moments::default();
    let mut build_means = Moments::default();
    for t in tallies {
        recall.merge(&t.recall);
        selectivity.merge(&t.selectivity);
        if t.recall.count > 0 {
            build_means.push(t.recall.mean());
        }
    }
    // builds are the independent units; a single build falls back to queries
    let (mean_recall, stderr_recall) = if tallies.len() > 1 {
        (build_means.mean(), build_means.stderr())
    } else {
        (recall.mean(), recall.stderr())
    };
    let d = points.dim();
    RecallReport {
        m: cfg.m,
        ell,
        d,
        g: cfg.g,
        n: points.len(),
        queries: n_queries,
        queries_with_neighbors: recall.count as usize,
        index_builds: tallies.len(),
        mean_recall,
        stderr_recall,
        mean_selectivity: selectivity.mean(),
        query_volume: cfg.cell_side().powi(d as i32),
        predicted_recall: predicted,
    }
}

/// Recall and selectivity of `n_queries` uniform random queries against the
/// max-metric range query of radius `b/2`, on one fixed index.
///
/// The tables' relative shifts are the same for every query, so this is the
/// recall of this particular index. It scatters around the model value from
/// one set of shifts to the next; see [`measure_recall_rebuilding`].
pub fn measure_recall(
    index: &GridIndex,
    points: &PointSet,
    n_queries: usize,
    ell: usize,
    seed: u64,
    exec: Exec,
) -> Result<RecallReport> {
    let cfg = *index.config();
    let predicted = check_recall_args(points, &cfg, n_queries, ell)?;
    if points.len() != index.len() || points.dim() != index.dim() {
        return domain("index was not built over this point set");
    }
    let d = points.dim();
    let key = purpose_key(seed, Purpose::Query, d as u64);
    let per_query = exec.map_indices(n_queries, |i| {
        evaluate_query(index, points, &random_query(key, i, d), ell)
    });
    let mut tally = BuildTally::default();
    for r in per_query {
        let (rec, sel) = r?;
        if let Some(rec) = rec {
            tally.recall.push(rec);
        }
        tally.selectivity.push(sel);
    }
    Ok(report(&cfg, points, ell, n_queries, predicted, &[tally]))
}

/// Like [`measure_recall`], but draws fresh table shifts every
/// `queries_per_build` queries, so the cells seen by successive queries are
/// independent as in the coverage model. The standard error is taken over
/// per-build mean recalls.
pub fn measure_recall_rebuilding(
    points: &PointSet,
    config: GridConfig,
    n_queries: usize,
    ell: usize,
    seed: u64,
    queries_per_build: usize,
    exec: Exec,
) -> Result<RecallReport> {
    let config = GridConfig::new(config.m, config.g, config.seed)?;
    let predicted = check_recall_args(points, &config, n_queries, ell)?;
    if queries_per_build == 0 {
        return domain("queries_per_build must be positive");
    }
    let d = points.dim();
    let key = purpose_key(seed, Purpose::Query, d as u64);
    let builds = n_queries.div_ceil(queries_per_build);
    let tallies = exec.map_indices(builds, |b| -> Result<BuildTally> {
        let build_seed = purpose_key(config.seed, Purpose::GridShift, b as u64 + 1);
        let index = build_index(
            points,
            GridConfig {
                seed: build_seed,
                ..config
            },
        )?;
        let mut tally = BuildTally::default();
        for i in b * queries_per_build..((b + 1) * queries_per_build).min(n_queries) {
            let (rec, sel) = evaluate_query(&index, points, &random_query(key, i, d), ell)?;
            if let Some(rec) = rec {
                tally.recall.push(rec);
            }
            tally.selectivity.push(sel);
        }
        Ok(tally)
    });
    let tallies = tallies.into_iter().collect::<Result<Vec<_>>>()?;
    Ok(report(&config, points, ell, n_queries, predicted, &tallies))
}
