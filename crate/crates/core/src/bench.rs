//! Timing harness for the three sampling schemes: number of points,
//! ambient dimension, and number of colours.

use std::fmt::Write as _;
use std::str::FromStr;
use std::time::Instant;

use serde::Serialize;

use crate::cloud::ChromaticPointCloud;
use crate::delaunay::chromatic_delaunay;
use crate::error::{Error, Result};
use crate::filtration::{alpha_from_triangulation, del_cech_from_triangulation, del_rips_from_triangulation, FiltrationKind};
use crate::rng;

/// Timings are the median of this many runs.
pub const REPEATS: usize = 5;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Scheme {
    Points,
    Dimension,
    Colours,
}

impl Scheme {
    pub fn as_str(self) -> &'static str {
        match self {
            Scheme::Points => "points",
            Scheme::Dimension => "dimension",
            Scheme::Colours => "colours",
        }
    }

    /// (n, d, colour count) for every instance of the scheme.
    pub fn grid(self) -> Vec<(usize, usize, usize)> {
        match self {
            Scheme::Points => [100, 200, 500, 1000, 2000].iter().map(|&n| (n, 2, 2)).collect(),
            Scheme::Dimension => (2..=5).map(|d| (200, d, 2)).collect(),
            Scheme::Colours => (2..=6).map(|k| (500, 2, k)).collect(),
        }
    }
}

impl FromStr for Scheme {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        match s {
            "points" => Ok(Scheme::Points),
            "dimension" => Ok(Scheme::Dimension),
            "colours" | "colors" => Ok(Scheme::Colours),
            other => Err(Error::InvalidInput(format!("unknown scheme {other:?}"))),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct BenchmarkRecord {
    pub scheme: String,
    pub n: usize,
    pub d: usize,
    /// Number of colours (not the largest label).
    pub colours: usize,
    /// A filtration kind, or "triangulation" for the baseline row.
    pub kind: String,
    pub seed: u64,
    pub median_seconds: f64,
    pub triangulation_seconds: f64,
    pub simplices: usize,
}

/// The cloud used for one instance. Points and colours schemes sample the
/// unit cube; the dimension scheme samples the unit sphere with a small
/// radial jitter so no d+2 points are cospherical.
pub fn instance_cloud(scheme: Scheme, n: usize, d: usize, colours: usize, seed: u64) -> ChromaticPointCloud {
    match scheme {
        Scheme::Points | Scheme::Colours => rng::random_cloud(seed, n, d, colours),
        Scheme::Dimension => {
            use rand::RngExt;
            let mut r = rng::rng(seed);
            let pts: Vec<Vec<f64>> = rng::unit_sphere(&mut r, n, d)
                .into_iter()
                .map(|p| {
                    let scale = 1.0 + 1e-3 * (r.random::<f64>() - 0.5);
                    p.into_iter().map(|x| x * scale).collect()
                })
                .collect();
            let cols = rng::random_colours(&mut r, n, colours);
            ChromaticPointCloud::new(pts, cols).expect("random points are distinct")
        }
    }
}

fn median(mut xs: Vec<f64>) -> f64 {
    xs.sort_by(f64::total_cmp);
    let m = xs.len() / 2;
    if xs.len() % 2 == 1 {
        xs[m]
    } else {
        0.5 * (xs[m - 1] + xs[m])
    }
}

fn timed<T>(f: impl FnOnce() -> Result<T>) -> Result<(T, f64)> {
    let t = Instant::now();
    let out = f()?;
    Ok((out, t.elapsed().as_secs_f64()))
}

/// Four rows for one cloud: the triangulation baseline and the three
/// filtrations built on it. Each filtration is timed without the
/// triangulation, single-threaded.
pub fn bench_cloud(scheme: &str, cloud: &ChromaticPointCloud, seed: u64, repeats: usize) -> Result<Vec<BenchmarkRecord>> {
    let mu = cloud.colours().to_vec();
    let kinds = [FiltrationKind::Alpha, FiltrationKind::DelCech, FiltrationKind::DelRips];
    let mut tri_times = vec![];
    let mut times = vec![vec![]; kinds.len()];
    let mut counts = [0usize; 3];
    let mut tri_count = 0;
    crate::par::with_threads(1, || -> Result<()> {
        for _ in 0..repeats.max(1) {
            let (tri, t) = timed(|| chromatic_delaunay(cloud, &mu))?;
            tri_times.push(t);
            tri_count = tri.complex.len();
            for (i, kind) in kinds.iter().enumerate() {
                let (f, t) = timed(|| match kind {
                    FiltrationKind::Alpha => alpha_from_triangulation(cloud, &mu, &tri),
                    FiltrationKind::DelCech => del_cech_from_triangulation(cloud, &mu, &tri),
                    _ => del_rips_from_triangulation(cloud, &mu, &tri),
                })?;
                times[i].push(t);
                counts[i] = f.len();
            }
        }
        Ok(())
    })?;
    let tri_median = median(tri_times);
    let row = |kind: &str, median_seconds: f64, simplices: usize| BenchmarkRecord {
        scheme: scheme.to_string(),
        n: cloud.len(),
        d: cloud.d(),
        colours: cloud.s() + 1,
        kind: kind.to_string(),
        seed,
        median_seconds,
        triangulation_seconds: tri_median,
        simplices,
    };
    let mut rows = vec![row("triangulation", tri_median, tri_count)];
    for (i, kind) in kinds.iter().enumerate() {
        rows.push(row(kind.as_str(), median(std::mem::take(&mut times[i])), counts[i]));
    }
    Ok(rows)
}

/// Run every instance of a scheme; `max_n` drops larger instances.
pub fn run_benchmark(scheme: Scheme, seed: u64, max_n: Option<usize>) -> Result<Vec<BenchmarkRecord>> {
    let mut rows = vec![];
    for (n, d, k) in scheme.grid() {
        if max_n.is_some_and(|m| n > m) {
            continue;
        }
        let cloud = instance_cloud(scheme, n, d, k, seed);
        rows.extend(bench_cloud(scheme.as_str(), &cloud, seed, REPEATS)?);
    }
    Ok(rows)
}

pub fn records_to_csv(rows: &[BenchmarkRecord]) -> String {
    let mut out = String::from("scheme,n,d,colours,kind,seed,median_seconds,triangulation_seconds,simplices\n");
    for r in rows {
        let _ = writeln!(
            out,
            "{},{},{},{},{},{},{:.9},{:.9},{}",
            r.scheme, r.n, r.d, r.colours, r.kind, r.seed, r.median_seconds, r.triangulation_seconds, r.simplices
        );
    }
    out
}
