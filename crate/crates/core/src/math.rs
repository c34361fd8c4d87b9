//! Float helpers that work without `std`.

#[inline]
pub(crate) fn sqrt(x: f64) -> f64 {
    libm::sqrt(x)
}

#[inline]
pub(crate) fn powf(x: f64, p: f64) -> f64 {
    libm::pow(x, p)
}

#[inline]
pub(crate) fn powi(x: f64, k: u32) -> f64 {
    let mut acc = 1.0;
    for _ in 0..k {
        acc *= x;
    }
    acc
}

/// Integer exponent if `p` is a small whole number.
#[inline]
pub(crate) fn small_integer(p: f64) -> Option<u32> {
    if (0.0..=64.0).contains(&p) && libm::floor(p) == p {
        Some(p as u32)
    } else {
        None
    }
}

/// `x^p` using repeated multiplication whenever `p` is a small integer.
#[inline]
pub(crate) fn pow(x: f64, p: f64) -> f64 {
    match small_integer(p) {
        Some(k) => powi(x, k),
        None => powf(x, p),
    }
}

/// `x^(1/p)`.
#[inline]
pub(crate) fn root(x: f64, p: f64) -> f64 {
    if p == 1.0 {
        x
    } else if p == 2.0 {
        sqrt(x)
    } else {
        powf(x, 1.0 / p)
    }
}

/// Neumaier compensated summation.
#[derive(Debug, Default, Clone, Copy)]
pub(crate) struct KahanSum {
    sum: f64,
    compensation: f64,
}

impl KahanSum {
    pub(crate) fn add(&mut self, x: f64) {
        let t = self.sum + x;
        if libm::fabs(self.sum) >= libm::fabs(x) {
            self.compensation += (self.sum - t) + x;
        } else {
            self.compensation += (x - t) + self.sum;
        }
        self.sum = t;
    }

    pub(crate) fn value(&self) -> f64 {
        self.sum + self.compensation
    }
}

impl core::iter::FromIterator<f64> for KahanSum {
    fn from_iter<I: IntoIterator<Item = f64>>(iter: I) -> Self {
        let mut acc = KahanSum::default();
        for x in iter {
            acc.add(x);
        }
        acc
    }
}
