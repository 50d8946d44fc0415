use super::gamma::ln_gamma;
use crate::error::{Error, Result};

/// Largest argument evaluated as a direct product.
const DIRECT_LIMIT: i64 = 30;

/// k!! for k >= -1, with (-1)!! = 0!! = 1.
///
/// Products are formed directly up to k = 30 and through `ln_double_factorial`
/// beyond that; very large arguments overflow to infinity, so ratios should go
/// through [`double_factorial_ratio`].
pub fn double_factorial(k: i64) -> Result<f64> {
    if k < -1 {
        return Err(Error::InvalidArgument(format!(
            "double factorial needs k >= -1, got {k}"
        )));
    }
    if k <= DIRECT_LIMIT {
        let mut acc = 1.0;
        let mut j = k;
        while j > 1 {
            acc *= j as f64;
            j -= 2;
        }
        return Ok(acc);
    }
    Ok(ln_double_factorial(k)?.exp())
}

/// ln(k!!) for k >= -1.
pub fn ln_double_factorial(k: i64) -> Result<f64> {
    if k < -1 {
        return Err(Error::InvalidArgument(format!(
            "double factorial needs k >= -1, got {k}"
        )));
    }
    if k <= 0 {
        return Ok(0.0);
    }
    let ln2 = std::f64::consts::LN_2;
    if k % 2 == 0 {
        let j = (k / 2) as f64;
        Ok(j * ln2 + ln_gamma(j + 1.0)?)
    } else {
        // (2j-1)!! = (2j)! / (2^j j!)
        let j = ((k + 1) / 2) as f64;
        Ok(ln_gamma(2.0 * j + 1.0)? - j * ln2 - ln_gamma(j + 1.0)?)
    }
}

/// a!! / b!! without intermediate overflow.
pub fn double_factorial_ratio(a: i64, b: i64) -> Result<f64> {
    if a <= DIRECT_LIMIT && b <= DIRECT_LIMIT {
        return Ok(double_factorial(a)? / double_factorial(b)?);
    }
    Ok((ln_double_factorial(a)? - ln_double_factorial(b)?).exp())
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn base_cases() {
        assert_eq!(double_factorial(-1).unwrap(), 1.0);
        assert_eq!(double_factorial(0).unwrap(), 1.0);
        assert_eq!(double_factorial(1).unwrap(), 1.0);
    }

    #[test]
    fn six_is_48() {
        assert_eq!(double_factorial(6).unwrap(), 6.0 * 4.0 * 2.0);
    }

    #[test]
    fn rejects_below_minus_one() {
        assert!(double_factorial(-2).is_err());
        assert!(ln_double_factorial(-3).is_err());
    }

    #[test]
    fn recurrence() {
        for k in 1..60 {
            let lhs = double_factorial(k).unwrap();
            let rhs = k as f64 * double_factorial(k - 2).unwrap();
            assert!(((lhs - rhs) / rhs).abs() < 1e-12, "k = {k}");
        }
    }

    #[test]
    fn log_domain_agrees_with_product() {
        for k in 1..=30 {
            let direct = double_factorial(k).unwrap().ln();
            assert!((ln_double_factorial(k).unwrap() - direct).abs() < 1e-12);
        }
    }

    #[test]
    fn large_ratio() {
        // 401!!/399!! = 401
        let r = double_factorial_ratio(401, 399).unwrap();
        assert!((r - 401.0).abs() < 1e-9);
    }
}
