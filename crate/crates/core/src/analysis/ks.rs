//! Two-sample Kolmogorov–Smirnov test.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

const SERIES_TERMS: usize = 100;
const SERIES_EPS: f64 = 1e-10;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct KsResult {
    /// Supremum distance between the two empirical CDFs.
    pub statistic: f64,
    /// Two-sided asymptotic p-value.
    pub p_value: f64,
    pub n1: usize,
    pub n2: usize,
}

fn sorted(xs: &[f64], name: &str) -> Result<Vec<f64>> {
    if xs.is_empty() {
        return Err(Error::DegenerateSample(format!("{name} sample is empty")));
    }
    if xs.iter().any(|x| x.is_nan()) {
        return Err(Error::DegenerateSample(format!("{name} sample contains NaN")));
    }
    let mut v = xs.to_vec();
    v.sort_by(f64::total_cmp);
    Ok(v)
}

/// Exact ECDF supremum by a merged walk over both sorted samples; the p-value
/// uses the asymptotic Kolmogorov distribution at `sqrt(n1 n2 / (n1 + n2)) * D`.
pub fn ks_two_sample(a: &[f64], b: &[f64]) -> Result<KsResult> {
    let xs = sorted(a, "first")?;
    let ys = sorted(b, "second")?;
    let (n1, n2) = (xs.len(), ys.len());
    let (mut i, mut j) = (0usize, 0usize);
    let mut d: f64 = 0.0;
    while i < n1 && j < n2 {
        let v = if xs[i] <= ys[j] { xs[i] } else { ys[j] };
        while i < n1 && xs[i] == v {
            i += 1;
        }
        while j < n2 && ys[j] == v {
            j += 1;
        }
        d = d.max((i as f64 / n1 as f64 - j as f64 / n2 as f64).abs());
    }
    // past this point one ECDF is 1 and the gap only shrinks
    let ne = (n1 * n2) as f64 / (n1 + n2) as f64;
    Ok(KsResult {
        statistic: d,
        p_value: kolmogorov_sf(ne.sqrt() * d),
        n1,
        n2,
    })
}

/// Survival function of the Kolmogorov distribution, `P(K > lambda)`.
pub fn kolmogorov_sf(lambda: f64) -> f64 {
    if lambda <= 0.0 {
        return 1.0;
    }
    let q = if lambda < 1.18 {
        // small-lambda form converges fast: P(K <= x) = sqrt(2 pi)/x * sum exp(-(2j-1)^2 pi^2 / (8 x^2))
        let mut sum = 0.0;
        for j in 1..=SERIES_TERMS {
            let k = (2 * j - 1) as f64;
            let term = (-(k * k) * std::f64::consts::PI.powi(2) / (8.0 * lambda * lambda)).exp();
            sum += term;
            if term < SERIES_EPS * sum {
                break;
            }
        }
        1.0 - (2.0 * std::f64::consts::PI).sqrt() / lambda * sum
    } else {
        let mut sum = 0.0;
        let mut sign = 1.0;
        for j in 1..=SERIES_TERMS {
            let jf = j as f64;
            let term = (-2.0 * jf * jf * lambda * lambda).exp();
            sum += sign * term;
            if term < SERIES_EPS {
                break;
            }
            sign = -sign;
        }
        2.0 * sum
    };
    q.clamp(0.0, 1.0)
}
