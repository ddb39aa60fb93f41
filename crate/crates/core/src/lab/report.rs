use crate::scalar::Scalar;

/// A measured curve against a theoretical bound.
#[derive(Debug, Clone, PartialEq)]
pub struct BoundReport<T> {
    pub times: Vec<T>,
    pub bound: Vec<T>,
    pub measured: Vec<T>,
    /// Statistical or discretisation allowance added to the bound.
    pub allowance: Vec<T>,
    /// `max_k (measured_k - bound_k - allowance_k)`; `-∞` for an empty report.
    pub margin: T,
    pub pass: bool,
}

impl<T: Scalar> BoundReport<T> {
    pub fn new(times: Vec<T>, bound: Vec<T>, measured: Vec<T>, allowance: Vec<T>) -> Self {
        assert!(
            times.len() == bound.len() && bound.len() == measured.len() && measured.len() == allowance.len(),
            "report columns must have equal length"
        );
        let margin = measured
            .iter()
            .zip(&bound)
            .zip(&allowance)
            .map(|((&m, &b), &a)| m - b - a)
            .fold(T::neg_infinity(), |acc, x| if x.is_nan() || acc.is_nan() { T::nan() } else { acc.max(x) });
        Self {
            times,
            bound,
            measured,
            allowance,
            margin,
            pass: margin <= T::zero(),
        }
    }

    /// Per-row `measured - bound - allowance`.
    pub fn row_margins(&self) -> Vec<T> {
        self.measured
            .iter()
            .zip(&self.bound)
            .zip(&self.allowance)
            .map(|((&m, &b), &a)| m - b - a)
            .collect()
    }

    pub fn len(&self) -> usize {
        self.times.len()
    }

    pub fn is_empty(&self) -> bool {
        self.times.is_empty()
    }
}
