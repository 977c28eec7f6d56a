//! Experiment drivers built on the physics modules: stabilization sweeps,
//! interaction comparisons, transmission spectroscopy, vacuum-Rabi traces
//! and a few tabulations. Everything here is `f64`; grid points run in
//! parallel on the current rayon pool and rows come back in grid order.

mod presets;
mod rabi;
mod spectroscopy;
mod stabilize;
mod tables;

pub use presets::*;
pub use rabi::{envelope_decay_rate, oscillation_frequency, vacuum_rabi_summary, vacuum_rabi_trace, RabiSummary};
pub use spectroscopy::{
    row_peaks, spectroscopy_map, spectroscopy_point, SpectroscopyCell, SpectroscopyMap, SpectroscopyOptions,
};
pub use stabilize::{
    cutoff_convergence, interaction_comparison, stabilization_sweep, sweep_drive, stabilized_point,
    CutoffCheck, StabilizedPoint,
};
pub use tables::{flux_sweep, quantize_table, rates_table};

/// A named column and its unit (empty for dimensionless).
#[derive(Clone, Debug, PartialEq)]
pub struct Column {
    pub name: String,
    pub unit: String,
}

impl Column {
    pub fn new(name: impl Into<String>, unit: impl Into<String>) -> Self {
        Self {
            name: name.into(),
            unit: unit.into(),
        }
    }
}

/// One grid point. Failed points keep their axis values where known and
/// carry the error text; their observables are `None`.
#[derive(Clone, Debug, PartialEq)]
pub struct Row {
    pub values: Vec<Option<f64>>,
    pub error: Option<String>,
}

impl Row {
    pub fn ok(values: Vec<f64>) -> Self {
        Self {
            values: values.into_iter().map(Some).collect(),
            error: None,
        }
    }

    /// Keeps `axis` values and blanks the remaining `width - axis.len()`.
    pub fn failed(axis: &[f64], width: usize, err: impl std::fmt::Display) -> Self {
        let mut values: Vec<Option<f64>> = axis.iter().copied().map(Some).collect();
        values.resize(width, None);
        Self {
            values,
            error: Some(err.to_string()),
        }
    }

    pub fn is_ok(&self) -> bool {
        self.error.is_none()
    }
}

/// Tabular experiment output.
#[derive(Clone, Debug, PartialEq)]
pub struct SweepResult {
    pub columns: Vec<Column>,
    pub rows: Vec<Row>,
    /// Free-form summary lines (fitted frequencies, warnings, ...).
    pub notes: Vec<String>,
}

impl SweepResult {
    pub fn new(columns: Vec<Column>) -> Self {
        Self {
            columns,
            rows: Vec::new(),
            notes: Vec::new(),
        }
    }

    pub fn column_index(&self, name: &str) -> Option<usize> {
        self.columns.iter().position(|c| c.name == name)
    }

    /// Values of a column, `None` where the row failed.
    pub fn column(&self, name: &str) -> Option<Vec<Option<f64>>> {
        let i = self.column_index(name)?;
        Some(self.rows.iter().map(|r| r.values[i]).collect())
    }

    /// Values of a column; panics-free helper that drops failed rows.
    pub fn column_ok(&self, name: &str) -> Vec<f64> {
        self.column(name)
            .map(|c| c.into_iter().flatten().collect())
            .unwrap_or_default()
    }

    pub fn failures(&self) -> usize {
        self.rows.iter().filter(|r| !r.is_ok()).count()
    }
}

fn columns(spec: &[(&str, &str)]) -> Vec<Column> {
    spec.iter().map(|(n, u)| Column::new(*n, *u)).collect()
}

/// `count` evenly spaced points on `[start, stop]`.
pub fn linspace(start: f64, stop: f64, count: usize) -> Vec<f64> {
    match count {
        0 => Vec::new(),
        1 => vec![start],
        _ => {
            let step = (stop - start) / (count - 1) as f64;
            (0..count)
                .map(|k| if k + 1 == count { stop } else { start + step * k as f64 })
                .collect()
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn linspace_endpoints() {
        let v = linspace(0.0, std::f64::consts::PI, 17);
        assert_eq!(v.len(), 17);
        assert_eq!(v[0], 0.0);
        assert_eq!(v[16], std::f64::consts::PI);
        assert_eq!(linspace(2.0, 5.0, 1), vec![2.0]);
        assert!(linspace(0.0, 1.0, 0).is_empty());
    }

    #[test]
    fn failed_row_keeps_axis() {
        let r = Row::failed(&[1.0], 3, "boom");
        assert_eq!(r.values, vec![Some(1.0), None, None]);
        assert_eq!(r.error.as_deref(), Some("boom"));
        let mut s = SweepResult::new(columns(&[("a", ""), ("b", "")]));
        s.rows.push(Row::ok(vec![1.0, 2.0]));
        s.rows.push(Row::failed(&[3.0], 2, "x"));
        assert_eq!(s.column("b").unwrap(), vec![Some(2.0), None]);
        assert_eq!(s.column_ok("a"), vec![1.0, 3.0]);
        assert_eq!(s.failures(), 1);
    }
}
