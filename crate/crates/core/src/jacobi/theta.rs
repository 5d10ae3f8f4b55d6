use std::collections::BTreeMap;

use crate::arith::{ratio, Rat};
use crate::error::{Error, Result};

use super::{canon_rho, JacExp};

/// Theta decomposition phi = sum_mu h_mu theta_mu. Component mu carries the
/// coefficient c(D, mu) at the exponent D/4m = n - mu^2/4m.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ThetaComponents {
    pub k: i64,
    pub m: u64,
    pub prec: u64,
    /// components[mu]: D -> coefficient, for mu in 0..2m
    pub components: Vec<BTreeMap<u64, Rat>>,
}

impl ThetaComponents {
    pub fn exponent(&self, d: u64) -> Rat {
        ratio(d as i64, 4 * self.m as i64)
    }

    /// (exponent, coefficient) pairs of h_mu.
    pub fn series(&self, mu: usize) -> Vec<(Rat, Rat)> {
        self.components[mu].iter().map(|(&d, c)| (self.exponent(d), c.clone())).collect()
    }

    /// Multiply back against the theta series.
    pub fn reassemble(&self) -> Result<JacExp> {
        let m = self.m as i64;
        JacExp::from_fn(self.k, self.m, self.prec, |n, r| {
            let d = 4 * m * n - r * r;
            if d < 0 {
                return Ok(Rat::from_integer(0.into()));
            }
            let mu = r.rem_euclid(2 * m) as usize;
            self.components[mu]
                .get(&(d as u64))
                .cloned()
                .ok_or_else(|| Error::Precision(format!("h_{mu} lacks exponent {d}/{}", 4 * m)))
        })
    }
}

pub fn theta_decompose(phi: &JacExp) -> Result<ThetaComponents> {
    phi.check_invariants()?;
    let m = phi.index();
    let mut components = vec![BTreeMap::new(); 2 * m as usize];
    for (d, rho, c) in phi.classes() {
        for mu in [rho, (2 * m - rho) % (2 * m)] {
            debug_assert_eq!(canon_rho(m, mu as i64), rho);
            components[mu as usize].insert(d, c.clone());
        }
    }
    Ok(ThetaComponents { k: phi.weight(), m, prec: phi.prec(), components })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::arith::rat;

    #[test]
    fn index_one_class_identification() {
        let phi = JacExp::from_class_fn(4, 1, 3, |d, _| Ok(if d == 4 { rat(5) } else { rat(0) })).unwrap();
        let t = theta_decompose(&phi).unwrap();
        assert_eq!(t.components.len(), 2);
        assert_eq!(t.components[0][&4], rat(5));
        assert_eq!(t.exponent(4), rat(1));
        assert_eq!(t.reassemble().unwrap(), phi);
    }
}
