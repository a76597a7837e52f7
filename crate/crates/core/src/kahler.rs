//! Hermitian 2x2 blocks K_{a bbar} of a Kahler metric in holomorphic
//! coordinates (w1, w2), and the forms they define on real tangent vectors
//! written through their holomorphic components.

use num_complex::Complex64;

type C = Complex64;

/// K_{a bbar} with a, b in {1, 2}; index 1 is u (or U), index 2 is z (or Z).
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct MetricBlock {
    pub kuubar: C,
    pub kuzbar: C,
    pub kzubar: C,
    pub kzzbar: C,
}

/// Alias used for the Atiyah-Hitchin (U, Z) block.
pub type AHMetricBlock = MetricBlock;

impl MetricBlock {
    pub fn det(&self) -> C {
        self.kuubar * self.kzzbar - self.kuzbar * self.kzubar
    }

    fn entry(&self, a: usize, b: usize) -> C {
        match (a, b) {
            (0, 0) => self.kuubar,
            (0, 1) => self.kuzbar,
            (1, 0) => self.kzubar,
            _ => self.kzzbar,
        }
    }

    /// max of |K_uzbar - conj(K_zubar)| and the imaginary parts of the diagonal
    pub fn hermiticity_defect(&self) -> f64 {
        (self.kuzbar - self.kzubar.conj())
            .norm()
            .max(self.kuubar.im.abs())
            .max(self.kzzbar.im.abs())
    }

    pub fn is_positive_definite(&self) -> bool {
        self.kuubar.re > 0.0 && self.kzzbar.re > 0.0 && self.det().re > 0.0
    }

    /// sum K_{a bbar} X^a conj(Y^b)
    pub fn hermitian(&self, x: [C; 2], y: [C; 2]) -> C {
        let mut s = C::new(0.0, 0.0);
        for a in 0..2 {
            for b in 0..2 {
                s += self.entry(a, b) * x[a] * y[b].conj();
            }
        }
        s
    }

    /// omega(X, Y) = (i/2) sum K_{a bbar} (X^a conj(Y^b) - Y^a conj(X^b))
    pub fn omega(&self, x: [C; 2], y: [C; 2]) -> f64 {
        let s = self.hermitian(x, y) - self.hermitian(y, x);
        (C::new(0.0, 0.5) * s).re
    }

    /// g(X, X) = sum K_{a bbar} X^a conj(X^b), the metric compatible with omega
    pub fn norm(&self, x: [C; 2]) -> f64 {
        self.hermitian(x, x).re.max(0.0).sqrt()
    }
}

/// Omega(X, Y) = dw1 ^ dw2 (X, Y)
pub fn holomorphic_volume(x: [C; 2], y: [C; 2]) -> C {
    x[0] * y[1] - x[1] * y[0]
}
