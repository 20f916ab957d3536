//! Exponent sweeps over a single distribution and geometric convergence
//! fits toward the zero-share limit.

use std::fmt;
use std::str::FromStr;

use crate::distribution::{Distribution, Tolerance};
use crate::error::{Error, Result};
use crate::exponent::Exponent;
use crate::measures;

/// Denominator convention for the finite-exponent members.
///
/// `Def3` divides by all `n^2` ordered pairs, self-pairs included; this is
/// the defining normalization and the one every identity in this crate is
/// stated for. `Unbiased` divides by the `n (n - 1)` distinct pairs
/// instead, scaling each finite-exponent value by `n / (n - 1)`; sweeps are
/// reported in both conventions because published tables sometimes mix
/// them. The zero-share member is a limit, not a pair average, and is the
/// same in both modes.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum DenominatorMode {
    Def3,
    Unbiased,
}

impl fmt::Display for DenominatorMode {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            DenominatorMode::Def3 => "def3",
            DenominatorMode::Unbiased => "unbiased",
        })
    }
}

impl FromStr for DenominatorMode {
    type Err = String;

    fn from_str(s: &str) -> std::result::Result<Self, String> {
        match s.trim().to_ascii_lowercase().as_str() {
            "def3" => Ok(DenominatorMode::Def3),
            "unbiased" => Ok(DenominatorMode::Unbiased),
            other => Err(format!("unknown denominator mode '{other}' (expected def3 or unbiased)")),
        }
    }
}

/// One distribution evaluated across exponents, rows ascending in `p` with
/// infinity last.
#[derive(Debug, Clone, PartialEq)]
pub struct SweepTable {
    pub input: Distribution,
    pub mode: DenominatorMode,
    pub rows: Vec<(Exponent, f64)>,
}

/// Evaluates the family at every requested exponent.
pub fn p_sweep(d: &Distribution, ps: &[Exponent], mode: DenominatorMode) -> Result<SweepTable> {
    let mut ordered = ps.to_vec();
    ordered.sort_unstable_by(|a, b| a.as_f64().total_cmp(&b.as_f64()));
    let n = d.n();
    let mut rows = Vec::with_capacity(ordered.len());
    for p in ordered {
        let base = measures::g_p(d, p)?.value;
        let value = match (mode, p) {
            (DenominatorMode::Def3, _) | (_, Exponent::Infinity) => base,
            (DenominatorMode::Unbiased, Exponent::Finite(_)) => {
                // One entry admits no distinct pairs; the family is
                // identically zero there in either convention.
                if n > 1 {
                    base * n as f64 / (n - 1) as f64
                } else {
                    0.0
                }
            }
        };
        rows.push((p, value));
    }
    Ok(SweepTable { input: d.clone(), mode, rows })
}

/// The family on the two-point vector `(1, 2)` in closed form:
/// `1 / (2 (2^p + 1))`.
pub fn two_point_closed_form(p: f64) -> Result<f64> {
    if !p.is_finite() || p < 1.0 {
        return Err(Error::InvalidExponent { p });
    }
    Ok(1.0 / (2.0 * (p.exp2() + 1.0)))
}

/// Geometric fit of a sweep's approach to its large-exponent limit.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ConvergenceFit {
    /// The limiting value (the zero share, adjusted for the table's mode).
    pub limit: f64,
    /// Median per-unit-exponent contraction of the deviations; a fit of
    /// `|value - limit| ~ C * rate^p`.
    pub rate: f64,
}

#[derive(Debug, Clone, PartialEq)]
pub enum AnalysisError {
    /// Fewer than three finite rows, or every deviation from the limit is
    /// below the float noise floor, or no two rows are at distinct finite
    /// exponents.
    DegenerateTable,
    /// Deviations fail to shrink with the exponent.
    NotContracting { rate: f64 },
}

impl fmt::Display for AnalysisError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            AnalysisError::DegenerateTable => {
                write!(f, "table has too few finite rows above the noise floor to fit")
            }
            AnalysisError::NotContracting { rate } => {
                write!(f, "deviations do not contract (fitted rate {rate})")
            }
        }
    }
}

impl std::error::Error for AnalysisError {}

/// Deviations below this are float noise, not convergence signal.
const DEVIATION_FLOOR: f64 = 1e-15;

/// Fits `|value_p - limit| ~ C * rate^p` over the finite rows of a sweep.
///
/// Ratios of consecutive surviving deviations are normalized per unit of
/// exponent, then the median is taken; the median shrugs off a stray row
/// that sits at the noise floor.
pub fn fit_convergence(table: &SweepTable) -> std::result::Result<ConvergenceFit, AnalysisError> {
    let zero_share = measures::g_infinity(&table.input, Tolerance::default()).value;
    let n = table.input.n();
    let limit = match table.mode {
        DenominatorMode::Def3 => zero_share,
        DenominatorMode::Unbiased => {
            if n > 1 {
                zero_share * n as f64 / (n - 1) as f64
            } else {
                0.0
            }
        }
    };
    let finite: Vec<(f64, f64)> = table
        .rows
        .iter()
        .filter_map(|&(p, v)| match p {
            Exponent::Finite(p) => Some((p, v)),
            Exponent::Infinity => None,
        })
        .collect();
    if finite.len() < 3 {
        return Err(AnalysisError::DegenerateTable);
    }
    let surviving: Vec<(f64, f64)> = finite
        .iter()
        .map(|&(p, v)| (p, (v - limit).abs()))
        .filter(|&(_, dev)| dev >= DEVIATION_FLOOR)
        .collect();
    let mut ratios: Vec<f64> = surviving
        .windows(2)
        .filter(|w| w[1].0 > w[0].0)
        .map(|w| (w[1].1 / w[0].1).powf(1.0 / (w[1].0 - w[0].0)))
        .collect();
    if ratios.is_empty() {
        return Err(AnalysisError::DegenerateTable);
    }
    ratios.sort_unstable_by(f64::total_cmp);
    let mid = ratios.len() / 2;
    let rate = if ratios.len() % 2 == 1 {
        ratios[mid]
    } else {
        0.5 * (ratios[mid - 1] + ratios[mid])
    };
    if rate >= 1.0 {
        return Err(AnalysisError::NotContracting { rate });
    }
    Ok(ConvergenceFit { limit, rate })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn dist(values: &[f64]) -> Distribution {
        Distribution::new(values.to_vec()).unwrap()
    }

    fn standard_ps() -> Vec<Exponent> {
        vec![
            Exponent::Finite(1.0),
            Exponent::Finite(2.0),
            Exponent::Finite(3.0),
            Exponent::Finite(10.0),
            Exponent::Finite(20.0),
            Exponent::Infinity,
        ]
    }

    #[test]
    fn sweep_on_the_positive_ramp() {
        let x = dist(&[1.0, 2.0, 3.0, 4.0]);
        let table = p_sweep(&x, &standard_ps(), DenominatorMode::Def3).unwrap();
        let expected = [
            0.25,
            1.0 / 6.0,
            0.115,
            0.013778018310557886,
            0.0007907713648416096,
            0.0,
        ];
        assert_eq!(table.rows.len(), expected.len());
        for ((_, got), want) in table.rows.iter().zip(expected) {
            assert!((got - want).abs() < 1e-12, "got {got}, want {want}");
        }
    }

    #[test]
    fn sweep_with_a_zero_entry_in_both_modes() {
        let y = dist(&[0.0, 1.0, 2.0, 3.0]);
        let def3 = p_sweep(&y, &standard_ps(), DenominatorMode::Def3).unwrap();
        let expected = [
            5.0 / 12.0,
            5.0 / 14.0,
            23.0 / 72.0,
            0.25426973399473984,
            0.2500751597056549,
            0.25,
        ];
        for ((_, got), want) in def3.rows.iter().zip(expected) {
            assert!((got - want).abs() < 1e-12, "got {got}, want {want}");
        }

        let unbiased = p_sweep(&y, &standard_ps(), DenominatorMode::Unbiased).unwrap();
        let scaled = [5.0 / 9.0, 10.0 / 21.0, 23.0 / 54.0];
        for ((_, got), want) in unbiased.rows.iter().zip(scaled) {
            assert!((got - want).abs() < 1e-12, "got {got}, want {want}");
        }
        // The limit row is a zero share in both conventions.
        assert_eq!(unbiased.rows.last().unwrap().1, 0.25);
    }

    #[test]
    fn sweep_orders_rows_with_infinity_last() {
        let x = dist(&[1.0, 2.0]);
        let ps = [Exponent::Infinity, Exponent::Finite(3.0), Exponent::Finite(1.0)];
        let table = p_sweep(&x, &ps, DenominatorMode::Def3).unwrap();
        let order: Vec<f64> = table.rows.iter().map(|&(p, _)| p.as_f64()).collect();
        assert_eq!(order, vec![1.0, 3.0, f64::INFINITY]);
    }

    #[test]
    fn two_point_closed_form_values() {
        assert!((two_point_closed_form(1.0).unwrap() - 1.0 / 6.0).abs() < 1e-15);
        assert!((two_point_closed_form(2.0).unwrap() - 0.1).abs() < 1e-15);
        assert!((two_point_closed_form(3.0).unwrap() - 1.0 / 18.0).abs() < 1e-15);
        assert!(two_point_closed_form(0.5).is_err());
        assert!(two_point_closed_form(f64::INFINITY).is_err());
        assert!(two_point_closed_form(f64::NAN).is_err());
    }

    #[test]
    fn closed_form_matches_the_sweep() {
        let x = dist(&[1.0, 2.0]);
        for p in 1..=25 {
            let direct = measures::g_p(&x, Exponent::Finite(p as f64)).unwrap().value;
            let formula = two_point_closed_form(p as f64).unwrap();
            assert!((direct - formula).abs() < 1e-12, "p={p}");
        }
    }

    #[test]
    fn fit_recovers_the_two_point_halving_rate() {
        let x = dist(&[1.0, 2.0]);
        let ps: Vec<Exponent> = (5..=25)
            .map(|p| Exponent::Finite(p as f64))
            .chain([Exponent::Infinity])
            .collect();
        let table = p_sweep(&x, &ps, DenominatorMode::Def3).unwrap();
        let fit = fit_convergence(&table).unwrap();
        assert_eq!(fit.limit, 0.0);
        assert!((0.49..=0.51).contains(&fit.rate), "rate={}", fit.rate);
    }

    #[test]
    fn fit_rejects_degenerate_tables() {
        // Everything sits at the limit: no signal.
        let flat = dist(&[2.0, 2.0, 2.0]);
        let table = p_sweep(&flat, &standard_ps(), DenominatorMode::Def3).unwrap();
        assert_eq!(fit_convergence(&table), Err(AnalysisError::DegenerateTable));

        // Too few finite rows.
        let x = dist(&[1.0, 2.0]);
        let short = p_sweep(&x, &[Exponent::Finite(1.0), Exponent::Infinity], DenominatorMode::Def3)
            .unwrap();
        assert_eq!(fit_convergence(&short), Err(AnalysisError::DegenerateTable));
    }

    #[test]
    fn fit_reports_non_contracting_tables() {
        let table = SweepTable {
            input: dist(&[1.0, 1.0]),
            mode: DenominatorMode::Def3,
            rows: vec![
                (Exponent::Finite(1.0), 0.1),
                (Exponent::Finite(2.0), 0.2),
                (Exponent::Finite(3.0), 0.4),
            ],
        };
        match fit_convergence(&table) {
            Err(AnalysisError::NotContracting { rate }) => assert!((rate - 2.0).abs() < 1e-12),
            other => panic!("expected NotContracting, got {other:?}"),
        }
    }
}
