//! The gradient [Front(S), Incl(S*)] of a selective filtration.

use serde::Serialize;

use crate::cloud::ChromaticPointCloud;
use crate::error::{Error, Result};
use crate::filtration::{FilteredComplex, SelectiveFiltration};
use crate::simplex::{Simplex, SimplicialComplex};
use crate::stack::{extend_stack, front_simplex, included};

use super::{check_acyclicity, quotient_edges, Interval, VectorField};

#[derive(Debug, Clone)]
pub struct FiltrationGradient {
    pub complex: SimplicialComplex,
    pub field: VectorField,
    pub values: FilteredComplex,
}

#[derive(Debug, Clone, Serialize)]
pub struct MorseCheck {
    pub intervals: usize,
    pub critical: usize,
    /// Largest spread of values inside one interval.
    pub max_interval_spread: f64,
    /// Smallest value increase across a quotient edge.
    pub min_edge_gap: f64,
    pub acyclic: bool,
}

impl MorseCheck {
    pub fn holds(&self, tol: f64) -> bool {
        self.acyclic && self.max_interval_spread <= tol && self.min_edge_gap > tol
    }
}

/// One interval per minimizing stack; errors if the intervals do not
/// partition the complex.
pub fn filtration_gradient(cloud: &ChromaticPointCloud, mu: &[usize], sel: &SelectiveFiltration) -> Result<FiltrationGradient> {
    let mut intervals = std::collections::BTreeSet::new();
    for ((sigma, _), (stack, cert)) in sel.filtered.entries().iter().zip(&sel.solutions) {
        let front = front_simplex(cert).ok_or_else(|| Error::PartitionFailure(format!("{sigma:?} has an empty front")))?;
        let star = extend_stack(stack, cloud, mu, &sel.e);
        let incl = Simplex::new(included(&star, cloud, mu))?;
        let iv = Interval::new(front, incl).map_err(|e| Error::PartitionFailure(e.to_string()))?;
        if !iv.contains(sigma) {
            return Err(Error::PartitionFailure(format!("{sigma:?} is outside its interval {iv}")));
        }
        intervals.insert(iv);
    }
    let complex = sel.filtered.complex();
    let field = VectorField::on_complex(&complex, intervals.into_iter().collect())?;
    Ok(FiltrationGradient { complex, field, values: sel.filtered.clone() })
}

impl FiltrationGradient {
    pub fn check(&self) -> Result<MorseCheck> {
        let value = |s: &Simplex| self.values.value(s).expect("field covers the filtered complex");
        let mut spread: f64 = 0.0;
        let class_value: Vec<f64> = self
            .field
            .intervals()
            .iter()
            .map(|iv| {
                let vals: Vec<f64> = iv.members().iter().map(value).collect();
                let (lo, hi) = vals.iter().fold((f64::INFINITY, f64::NEG_INFINITY), |(a, b), &v| (a.min(v), b.max(v)));
                spread = spread.max(hi - lo);
                value(&iv.top)
            })
            .collect();
        let min_edge_gap = quotient_edges(&self.complex, &self.field)?
            .iter()
            .map(|&(a, b)| class_value[a] - class_value[b])
            .fold(f64::INFINITY, f64::min);
        Ok(MorseCheck {
            intervals: self.field.len(),
            critical: self.field.critical().len(),
            max_interval_spread: spread,
            min_edge_gap,
            acyclic: check_acyclicity(&self.complex, &self.field)?,
        })
    }
}
