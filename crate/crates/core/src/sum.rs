//! Compensated summation. Every O(n^2) double sum in this crate funnels
//! through these helpers so the naive and fast evaluation routes disagree
//! only by genuine algorithmic differences, not accumulation order noise.

/// Neumaier variant of Kahan summation: carries a running correction term
/// that also survives the case where the addend exceeds the partial sum.
#[derive(Debug, Clone, Copy, Default)]
pub struct KahanSum {
    sum: f64,
    c: f64,
}

impl KahanSum {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn add(&mut self, x: f64) {
        let t = self.sum + x;
        if self.sum.abs() >= x.abs() {
            self.c += (self.sum - t) + x;
        } else {
            self.c += (x - t) + self.sum;
        }
        self.sum = t;
    }

    pub fn value(&self) -> f64 {
        self.sum + self.c
    }
}

pub fn kahan_sum<I: IntoIterator<Item = f64>>(values: I) -> f64 {
    let mut acc = KahanSum::new();
    for v in values {
        acc.add(v);
    }
    acc.value()
}

/// Compensated dot product; the factors are multiplied plainly, only the
/// accumulation is compensated.
pub fn kahan_dot(a: &[f64], b: &[f64]) -> f64 {
    debug_assert_eq!(a.len(), b.len());
    let mut acc = KahanSum::new();
    for (x, y) in a.iter().zip(b) {
        acc.add(x * y);
    }
    acc.value()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn recovers_cancelled_tail() {
        // 1 + 1e100 - 1e100 loses the 1 under plain addition.
        assert_eq!(kahan_sum([1.0, 1e100, -1e100]), 1.0);
    }

    #[test]
    fn many_small_terms() {
        let n = 100_000;
        let got = kahan_sum(std::iter::repeat_n(0.1, n));
        assert!((got - 0.1 * n as f64).abs() < 1e-9);
    }

    #[test]
    fn dot_matches_plain_on_exact_input() {
        assert_eq!(kahan_dot(&[1.0, 2.0, 3.0], &[4.0, 5.0, 6.0]), 32.0);
    }
}
