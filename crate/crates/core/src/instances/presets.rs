use super::{Family, InstanceSpec};
use crate::{Error, Result};

/// Rounds a size down, never below one and never above `cap`.
fn size(x: f64, cap: usize) -> usize {
    (x.floor() as usize).clamp(1, cap.max(1))
}

/// Picks `L`, `D`, `d` and `k` for `family` at scale `(n, m)` and threshold
/// `δ`, following the case analysis of the matching lower bound. Here
/// `d = m/n` and `c = (1-α)^j` is the path-length factor of the family.
///
/// The returned spec carries no swap or padding.
pub fn parameter_presets(family: Family, n: usize, m: usize, delta: f64, alpha: f64) -> Result<InstanceSpec> {
    if !(delta > 0.0 && delta <= 1.0) {
        return Err(Error::RegimeUndefined(delta));
    }
    if !(alpha > 0.0 && alpha < 1.0) {
        return Err(Error::InvalidArgument(format!("alpha must lie in (0,1), got {alpha}")));
    }
    if n == 0 || m < n || (m as u128) > (n as u128) * (n as u128) {
        return Err(Error::InvalidArgument(format!("need n <= m <= n^2, got n = {n}, m = {m}")));
    }
    let q = 1.0 - alpha;
    let (nf, mf) = (n as f64, m as f64);
    let d = m / n;
    let df = d as f64;
    let spec = InstanceSpec::new(family, n, alpha).with_d(d);
    let need = |c: f64| if c / delta < 1.0 { Err(Error::RegimeUndefined(delta)) } else { Ok(c) };
    let spec = match family {
        Family::FolklorePair | Family::OutputSizeSt => {
            let k = size(1.0 / delta, n);
            let spec = spec.with_k(k);
            if family == Family::OutputSizeSt {
                InstanceSpec { adj_variant: true, ..spec }
            } else {
                spec
            }
        }
        Family::SpWorst => {
            let c = need(q.powi(3))?;
            let side = size((c * mf.min(1.0 / delta)).sqrt(), n);
            spec.with_ld(side, side)
        }
        Family::SpAvg => {
            let c = need(q.powi(4))?;
            if delta <= 1.0 / (nf * mf) {
                spec.with_ld(size(c * nf, n), d)
            } else if delta <= c / df.powi(3) {
                spec.with_ld(size((c / (df * delta)).sqrt(), n), d)
            } else {
                let side = size((c / delta).cbrt(), n);
                spec.with_ld(side, side)
            }
        }
        Family::StWorstAdj | Family::SnAvgAdj | Family::SnAvgInsorted => {
            if family == Family::StWorstAdj {
                need(q * q)?;
            }
            spec
        }
        Family::StWorstFull => {
            let c = need(q * q)?;
            let big_d = if delta <= c / df { d } else { size(c / delta, n) };
            spec.with_ld(1, big_d)
        }
        Family::StAvgAdj => {
            let c = need(q.powi(3))?;
            let l = if delta <= 1.0 / nf { size(c * nf, n) } else { size(c / delta, n) };
            spec.with_ld(l, 1)
        }
        Family::StAvgJump => {
            let c = need(q.powi(3))?;
            if delta <= 1.0 / mf {
                spec.with_ld(size(c * nf, n), d)
            } else if delta <= df * c / nf {
                spec.with_ld(size((nf * c / (df * delta)).sqrt(), n), size((df * c / (nf * delta)).sqrt(), n))
            } else {
                spec.with_ld(size(c / delta, n), 1)
            }
        }
        Family::StAvgFull => {
            let c = need(q.powi(3))?;
            if delta <= 1.0 / mf {
                spec.with_ld(size(c * nf, n), d)
            } else if delta <= c / df {
                spec.with_ld(size(c / (df * delta), n), d)
            } else {
                spec.with_ld(1, size(c / delta, n))
            }
        }
        Family::SnWorstFull => {
            let big_d = size(mf.sqrt(), usize::MAX);
            spec.with_ld(size(nf.sqrt() / mf.powf(0.25), big_d), big_d)
        }
        Family::SnAvgXor => spec.with_ld(size((nf / df).sqrt(), n), 1),
        Family::SnAvgFull => spec.with_ld(size(nf.cbrt(), n), size(mf.sqrt() / nf.cbrt(), n)),
    };
    Ok(spec)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn single_pair_average_case_regimes() {
        let (n, m, a) = (4096, 4096 * 8, 0.2);
        let c: f64 = 0.8f64.powi(4);
        // δ ≥ c/d³: L = D = (c/δ)^{1/3}
        let s = parameter_presets(Family::SpAvg, n, m, 2f64.powi(-10), a).unwrap();
        let side = (c * 1024.0).cbrt().floor() as usize;
        assert_eq!((s.l, s.big_d), (side, side));
        // below it: L = (c/(dδ))^{1/2}, D = d
        let s = parameter_presets(Family::SpAvg, n, m, 2f64.powi(-12), a).unwrap();
        assert_eq!((s.l, s.big_d), ((c * 4096.0 / 8.0).sqrt().floor() as usize, 8));
        // δ ≤ 1/(nm): L = cn
        let s = parameter_presets(Family::SpAvg, n, m, 1e-9, a).unwrap();
        assert_eq!(s.l, (c * 4096.0).floor() as usize);
    }

    #[test]
    fn worst_case_and_target_presets() {
        let s = parameter_presets(Family::SpWorst, 100, 400, 0.01, 0.2).unwrap();
        let side = (0.512f64 * 100.0).sqrt().floor() as usize;
        assert_eq!((s.l, s.big_d), (side, side));
        // δ ≥ c/d: D = c/δ
        let s = parameter_presets(Family::StWorstFull, 100, 400, 0.4, 0.2).unwrap();
        assert_eq!(s.big_d, 1);
        let s = parameter_presets(Family::StWorstFull, 100, 400, 0.01, 0.2).unwrap();
        assert_eq!(s.big_d, 4);
        let s = parameter_presets(Family::StAvgAdj, 100, 400, 0.05, 0.2).unwrap();
        assert_eq!(s.l, 10);
    }

    #[test]
    fn undefined_regimes() {
        assert!(matches!(parameter_presets(Family::SpAvg, 10, 20, 0.0, 0.2), Err(Error::RegimeUndefined(_))));
        assert!(matches!(parameter_presets(Family::SpAvg, 10, 20, 0.9, 0.2), Err(Error::RegimeUndefined(_))));
        assert!(matches!(parameter_presets(Family::StAvgJump, 10, 20, 0.6, 0.2), Err(Error::RegimeUndefined(_))));
        assert!(parameter_presets(Family::SpAvg, 10, 5, 0.1, 0.2).is_err());
    }

    #[test]
    fn every_preset_generates() {
        for family in Family::ALL {
            let spec = parameter_presets(family, 64, 256, 0.05, 0.2).unwrap();
            super::super::generate(&spec).unwrap_or_else(|e| panic!("{family}: {e}"));
        }
    }
}
