//! Truncated Taylor jets in three real variables (y1, y2, y4), total order <= 4.

use std::sync::OnceLock;

use crate::bigc::BigC;

pub const ORDER: usize = 4;

struct Tables {
    monos: Vec<[usize; 3]>,
    index: Vec<Vec<Vec<usize>>>,
    products: Vec<(usize, usize, usize)>,
}

fn tables() -> &'static Tables {
    static T: OnceLock<Tables> = OnceLock::new();
    T.get_or_init(|| {
        let mut monos = Vec::new();
        let mut index = vec![vec![vec![usize::MAX; ORDER + 1]; ORDER + 1]; ORDER + 1];
        for deg in 0..=ORDER {
            for i in (0..=deg).rev() {
                for j in (0..=deg - i).rev() {
                    let l = deg - i - j;
                    index[i][j][l] = monos.len();
                    monos.push([i, j, l]);
                }
            }
        }
        let mut products = Vec::new();
        for (a, ma) in monos.iter().enumerate() {
            for (b, mb) in monos.iter().enumerate() {
                let s = [ma[0] + mb[0], ma[1] + mb[1], ma[2] + mb[2]];
                if s[0] + s[1] + s[2] <= ORDER {
                    products.push((a, b, index[s[0]][s[1]][s[2]]));
                }
            }
        }
        Tables { monos, index, products }
    })
}

/// f(y0 + d) = sum_e c_e d^e with d = (d1, d2, d4).
#[derive(Clone, Debug)]
pub struct Jet {
    c: Vec<BigC>,
}

fn factorial(n: usize) -> i64 {
    (1..=n as i64).product()
}

impl Jet {
    pub fn constant(v: BigC) -> Jet {
        let mut c = vec![BigC::zero(); tables().monos.len()];
        c[0] = v;
        Jet { c }
    }

    /// The coordinate function number `var` (0, 1, 2) with value v.
    pub fn var(var: usize, v: BigC) -> Jet {
        let mut j = Jet::constant(v);
        let mut e = [0; 3];
        e[var] = 1;
        j.c[tables().index[e[0]][e[1]][e[2]]] = BigC::one();
        j
    }

    pub fn value(&self) -> &BigC {
        &self.c[0]
    }

    /// The partial derivative d^e f at the base point.
    pub fn derivative(&self, e: [usize; 3]) -> BigC {
        if e.iter().sum::<usize>() > ORDER {
            panic!("derivative order beyond jet order");
        }
        let f = factorial(e[0]) * factorial(e[1]) * factorial(e[2]);
        self.c[tables().index[e[0]][e[1]][e[2]]].clone() * BigC::int(f)
    }

    pub fn add(&self, o: &Jet) -> Jet {
        Jet { c: self.c.iter().zip(&o.c).map(|(a, b)| a + b).collect() }
    }

    pub fn sub(&self, o: &Jet) -> Jet {
        Jet { c: self.c.iter().zip(&o.c).map(|(a, b)| a - b).collect() }
    }

    pub fn scale(&self, s: &BigC) -> Jet {
        Jet { c: self.c.iter().map(|a| a * s).collect() }
    }

    pub fn mul(&self, o: &Jet) -> Jet {
        let mut c = vec![BigC::zero(); self.c.len()];
        for &(a, b, r) in &tables().products {
            if self.c[a].is_zero() || o.c[b].is_zero() {
                continue;
            }
            c[r] = c[r].clone() + &self.c[a] * &o.c[b];
        }
        Jet { c }
    }

    /// f(self) from the derivatives f(u0), f'(u0), ..., f''''(u0).
    pub fn compose(&self, derivs: &[BigC]) -> Jet {
        assert_eq!(derivs.len(), ORDER + 1);
        let mut delta = self.clone();
        delta.c[0] = BigC::zero();
        let mut acc = Jet::constant(derivs[0].clone());
        let mut pw = Jet::constant(BigC::one());
        for (j, d) in derivs.iter().enumerate().skip(1) {
            pw = pw.mul(&delta);
            acc = acc.add(&pw.scale(&(d.clone() / BigC::int(factorial(j)))));
        }
        acc
    }

    pub fn exp(&self) -> Jet {
        let e = self.value().exp();
        self.compose(&vec![e; ORDER + 1])
    }

    /// Principal power u^s.
    pub fn pow(&self, s: &BigC) -> Jet {
        let u0 = self.value().clone();
        let mut derivs = Vec::with_capacity(ORDER + 1);
        let mut coef = BigC::one();
        for j in 0..=ORDER {
            let e = s.clone() - BigC::int(j as i64);
            derivs.push(coef.clone() * u0.pow(&e));
            coef = coef * e;
        }
        self.compose(&derivs)
    }

    pub fn recip(&self) -> Jet {
        self.pow(&BigC::int(-1))
    }
}
