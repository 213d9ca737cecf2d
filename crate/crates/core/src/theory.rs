//! Variance-reduction methods and their convergence-condition constants.

use crate::error::{Error, Result};

/// Gradient estimation strategy used by the solver.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Method {
    Saga,
    Svrg,
    Sarah,
    Full,
}

impl Method {
    pub fn name(&self) -> &'static str {
        match self {
            Method::Saga => "mm-saga",
            Method::Svrg => "mm-svrg",
            Method::Sarah => "mm-sarah",
            Method::Full => "mm-full",
        }
    }

    pub fn parse(s: &str) -> Result<Method> {
        match s.to_ascii_lowercase().as_str() {
            "mm-saga" | "saga" => Ok(Method::Saga),
            "mm-svrg" | "svrg" => Ok(Method::Svrg),
            "mm-sarah" | "sarah" => Ok(Method::Sarah),
            "mm-full" | "full" => Ok(Method::Full),
            other => Err(Error::InvalidMethod(format!("unknown method '{}'", other))),
        }
    }

    /// True for the minibatch estimators (everything except the exact full
    /// gradient).
    pub fn is_stochastic(&self) -> bool {
        !matches!(self, Method::Full)
    }

    /// True when the method uses an expected refresh/restart period m.
    pub fn uses_period(&self) -> bool {
        matches!(self, Method::Svrg | Method::Sarah)
    }
}

impl std::fmt::Display for Method {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(self.name())
    }
}

/// The per-method constants (rho, V_Upsilon, V) entering the step-size
/// condition (2*mu - L)^2 - 4*(V + V_Upsilon/rho) > 0:
///
/// | method | rho    | V_Upsilon         | V     |
/// |--------|--------|-------------------|-------|
/// | saga   | b/(2n) | (2n-b) L^2 / b^2  | 0     |
/// | svrg   | 1/(2m) | (2m-1) L^2 / b    | 0     |
/// | sarah  | 1/m    | (m-1) L^2 / (mb)  | L^2/b |
/// | full   | 1      | 0                 | 0     |
#[derive(Clone, Copy, Debug)]
pub struct TheoryConstants {
    pub method: Method,
    pub rho: f64,
    pub v_upsilon: f64,
    pub v: f64,
    pub mu: f64,
    pub l: f64,
    pub b: usize,
    pub m: Option<u64>,
    pub n: usize,
}

impl TheoryConstants {
    pub fn new(
        method: Method,
        n: usize,
        b: usize,
        m: Option<u64>,
        l: f64,
        mu: f64,
    ) -> Result<Self> {
        if n == 0 {
            return Err(Error::Data("component count must be positive".into()));
        }
        if b == 0 || b > n {
            return Err(Error::InvalidParameter(format!(
                "batch size {} outside [1, {}]",
                b, n
            )));
        }
        let nf = n as f64;
        let bf = b as f64;
        let l2 = l * l;
        let (rho, v_upsilon, v) = match method {
            Method::Saga => (bf / (2.0 * nf), (2.0 * nf - bf) * l2 / (bf * bf), 0.0),
            Method::Svrg => {
                let mf = period(method, m)? as f64;
                (1.0 / (2.0 * mf), (2.0 * mf - 1.0) * l2 / bf, 0.0)
            }
            Method::Sarah => {
                let mf = period(method, m)? as f64;
                (1.0 / mf, (mf - 1.0) * l2 / (mf * bf), l2 / bf)
            }
            Method::Full => (1.0, 0.0, 0.0),
        };
        Ok(TheoryConstants {
            method,
            rho,
            v_upsilon,
            v,
            mu,
            l,
            b,
            m,
            n,
        })
    }

    /// (2*mu - L)^2 - 4*(V + V_Upsilon/rho).
    pub fn condition_gap(&self) -> f64 {
        let lhs = 2.0 * self.mu - self.l;
        lhs * lhs - 4.0 * (self.v + self.v_upsilon / self.rho)
    }

    /// Ratio (2*mu - L)^2 / (4*(V + V_Upsilon/rho)); infinite when the
    /// denominator vanishes (the full-gradient method).
    pub fn condition_margin(&self) -> f64 {
        let lhs = 2.0 * self.mu - self.l;
        let rhs = 4.0 * (self.v + self.v_upsilon / self.rho);
        if rhs == 0.0 {
            f64::INFINITY
        } else {
            lhs * lhs / rhs
        }
    }

    /// The step-size condition, strictly. Requires mu > L/2: the squared
    /// left-hand side would otherwise accept negative 2*mu - L.
    pub fn condition_holds(&self) -> bool {
        2.0 * self.mu > self.l && self.condition_gap() > 0.0
    }
}

fn period(method: Method, m: Option<u64>) -> Result<u64> {
    match m {
        Some(m) if m >= 1 => Ok(m),
        _ => Err(Error::InvalidParameter(format!(
            "{} requires an expected period m >= 1",
            method.name()
        ))),
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn constants_match_their_defining_expressions() {
        let n = 1000usize;
        let b = 50usize;
        let m = 10u64;
        let l = 0.7f64;

        let saga = TheoryConstants::new(Method::Saga, n, b, None, l, l).unwrap();
        assert_eq!(saga.rho, 50.0 / 2000.0);
        assert_eq!(saga.v_upsilon, (2000.0 - 50.0) * l * l / 2500.0);
        assert_eq!(saga.v, 0.0);

        let svrg = TheoryConstants::new(Method::Svrg, n, b, Some(m), l, l).unwrap();
        assert_eq!(svrg.rho, 1.0 / 20.0);
        assert_eq!(svrg.v_upsilon, 19.0 * l * l / 50.0);
        assert_eq!(svrg.v, 0.0);

        let sarah = TheoryConstants::new(Method::Sarah, n, b, Some(m), l, l).unwrap();
        assert_eq!(sarah.rho, 1.0 / 10.0);
        assert_eq!(sarah.v_upsilon, 9.0 * l * l / (10.0 * 50.0));
        assert_eq!(sarah.v, l * l / 50.0);

        let full = TheoryConstants::new(Method::Full, n, b, None, l, l).unwrap();
        assert_eq!(full.rho, 1.0);
        assert_eq!(full.v_upsilon, 0.0);
        assert_eq!(full.v, 0.0);
        assert!(full.condition_margin().is_infinite());
    }

    #[test]
    fn condition_rejects_mu_at_half_l() {
        let c = TheoryConstants::new(Method::Saga, 100, 10, None, 1.0, 0.5).unwrap();
        assert!(!c.condition_holds());
    }

    #[test]
    fn period_required_for_svrg_and_sarah() {
        assert!(TheoryConstants::new(Method::Svrg, 10, 2, None, 1.0, 1.0).is_err());
        assert!(TheoryConstants::new(Method::Sarah, 10, 2, Some(0), 1.0, 1.0).is_err());
    }

    #[test]
    fn method_names_round_trip() {
        for m in [Method::Saga, Method::Svrg, Method::Sarah, Method::Full] {
            assert_eq!(Method::parse(m.name()).unwrap(), m);
        }
        assert!(Method::parse("sgd").is_err());
    }
}
