//! Error-compensated (Kahan–Babuška / Neumaier) accumulation.

use std::ops::AddAssign;

#[derive(Debug, Clone, Copy, Default, PartialEq)]
pub struct CompensatedSum {
    sum: f64,
    compensation: f64,
}

impl CompensatedSum {
    pub fn new() -> Self {
        Self::default()
    }

    #[inline]
    pub fn add(&mut self, value: f64) {
        let t = self.sum + value;
        if self.sum.abs() >= value.abs() {
            self.compensation += (self.sum - t) + value;
        } else {
            self.compensation += (value - t) + self.sum;
        }
        self.sum = t;
    }

    /// Folds another partial sum in, keeping both compensation terms.
    pub fn merge(&mut self, other: &CompensatedSum) {
        self.add(other.sum);
        self.add(other.compensation);
    }

    pub fn value(&self) -> f64 {
        self.sum + self.compensation
    }
}

impl AddAssign<f64> for CompensatedSum {
    fn add_assign(&mut self, rhs: f64) {
        self.add(rhs);
    }
}

impl FromIterator<f64> for CompensatedSum {
    fn from_iter<I: IntoIterator<Item = f64>>(iter: I) -> Self {
        let mut acc = Self::new();
        for v in iter {
            acc.add(v);
        }
        acc
    }
}

/// Compensated sum of complex values given as `(re, im)`.
#[derive(Debug, Clone, Copy, Default, PartialEq)]
pub struct ComplexSum {
    pub re: CompensatedSum,
    pub im: CompensatedSum,
}

impl ComplexSum {
    #[inline]
    pub fn add(&mut self, re: f64, im: f64) {
        self.re.add(re);
        self.im.add(im);
    }

    pub fn merge(&mut self, other: &ComplexSum) {
        self.re.merge(&other.re);
        self.im.merge(&other.im);
    }

    pub fn value(&self) -> (f64, f64) {
        (self.re.value(), self.im.value())
    }

    pub fn norm_sqr(&self) -> f64 {
        let (re, im) = self.value();
        re * re + im * im
    }
}
