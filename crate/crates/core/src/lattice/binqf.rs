use serde::{Deserialize, Serialize};

use crate::arith::{gcd, ratio, Rat};
use crate::error::{Error, Result};

pub type Mat2 = [[i64; 2]; 2];

pub const IDENTITY: Mat2 = [[1, 0], [0, 1]];

pub fn mat_mul(a: &Mat2, b: &Mat2) -> Mat2 {
    let mut c = [[0; 2]; 2];
    for i in 0..2 {
        for j in 0..2 {
            c[i][j] = a[i][0] * b[0][j] + a[i][1] * b[1][j];
        }
    }
    c
}

pub fn mat_det(a: &Mat2) -> i64 {
    a[0][0] * a[1][1] - a[0][1] * a[1][0]
}

/// The half-integral form T = (n, r/2; r/2, m), i.e. n x^2 + r x y + m y^2.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct BinQF {
    pub n: i64,
    pub r: i64,
    pub m: i64,
}

impl BinQF {
    pub fn new(n: i64, r: i64, m: i64) -> Self {
        BinQF { n, r, m }
    }

    /// det(2T) = 4nm - r^2.
    pub fn det2(&self) -> i64 {
        4 * self.n * self.m - self.r * self.r
    }

    pub fn det(&self) -> Rat {
        ratio(self.det2(), 4)
    }

    pub fn content(&self) -> i64 {
        gcd(gcd(self.n.abs(), self.r.abs()), self.m.abs())
    }

    pub fn is_positive_definite(&self) -> bool {
        self.n > 0 && self.det2() > 0
    }

    pub fn is_semidefinite(&self) -> bool {
        self.n >= 0 && self.m >= 0 && self.det2() >= 0
    }

    pub fn is_reduced(&self) -> bool {
        self.r.abs() <= self.m && self.m <= self.n
    }

    /// T[U] = U^t T U.
    pub fn transform(&self, u: &Mat2) -> BinQF {
        let (a, b, c, d) = (u[0][0], u[0][1], u[1][0], u[1][1]);
        let q = |x: i64, y: i64| self.n * x * x + self.r * x * y + self.m * y * y;
        BinQF {
            n: q(a, c),
            r: 2 * self.n * a * b + self.r * (a * d + b * c) + 2 * self.m * c * d,
            m: q(b, d),
        }
    }

    /// The (n, m) entries swapped: T[[0,1],[1,0]].
    pub fn swapped(&self) -> BinQF {
        BinQF { n: self.m, r: self.r, m: self.n }
    }

    /// GL2(Z)-equivalent form with 0 <= r <= m <= n, and U with T[U] equal to it.
    pub fn reduce(&self) -> Result<(BinQF, Mat2)> {
        if !self.is_positive_definite() {
            return Err(Error::InvalidParam(format!("{self:?} is not positive definite")));
        }
        let mut t = *self;
        let mut u = IDENTITY;
        loop {
            // bring r into (-m, m]
            let two_m = 2 * t.m;
            let j = (t.m - t.r).div_euclid(two_m);
            if j != 0 {
                let s = [[1, 0], [j, 1]];
                t = t.transform(&s);
                u = mat_mul(&u, &s);
            }
            if t.n < t.m {
                let s = [[0, 1], [1, 0]];
                t = t.transform(&s);
                u = mat_mul(&u, &s);
                continue;
            }
            break;
        }
        if t.r < 0 {
            let s = [[1, 0], [0, -1]];
            t = t.transform(&s);
            u = mat_mul(&u, &s);
        }
        debug_assert_eq!(self.transform(&u), t);
        Ok((t, u))
    }

    /// Canonical representative of the GL2(Z) class (positive definite),
    /// or of the rank <= 1 classes (c, 0, 0) with c the content.
    pub fn canonical(&self) -> Result<BinQF> {
        if self.is_positive_definite() {
            return Ok(self.reduce()?.0);
        }
        if self.is_semidefinite() && self.det2() == 0 {
            return Ok(BinQF::new(self.content(), 0, 0));
        }
        Err(Error::InvalidParam(format!("{self:?} is not positive semidefinite")))
    }

    /// min over nonzero integral vectors = m of the reduced form.
    pub fn min(&self) -> Result<i64> {
        Ok(self.reduce()?.0.m)
    }
}

/// Reduced forms 0 <= r <= m <= n with det(2T) <= bound.
pub fn reduced_forms(det2_max: i64) -> Vec<BinQF> {
    let mut out = Vec::new();
    let mut m = 1;
    while 3 * m * m <= det2_max {
        let mut n = m;
        while 4 * n * m - m * m <= det2_max {
            for r in 0..=m {
                let t = BinQF::new(n, r, m);
                if t.det2() > 0 && t.det2() <= det2_max {
                    out.push(t);
                }
            }
            n += 1;
        }
        m += 1;
    }
    out.sort();
    out
}
