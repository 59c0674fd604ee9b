//! dB bookkeeping shared by every module.

/// Speed of light in vacuum, m/s.
pub const SPEED_OF_LIGHT: f64 = 299_792_458.0;

#[inline]
pub fn db_to_linear(db: f64) -> f64 {
    10f64.powf(db / 10.0)
}

#[inline]
pub fn linear_to_db(lin: f64) -> f64 {
    10.0 * lin.log10()
}

/// Power sum of dB quantities: `10·log10(Σ 10^(x/10))`. An empty sum is
/// `-inf`.
pub fn db_sum<I: IntoIterator<Item = f64>>(terms: I) -> f64 {
    linear_to_db(terms.into_iter().map(db_to_linear).sum())
}

#[inline]
pub fn watts_to_dbm(w: f64) -> f64 {
    linear_to_db(w / 1e-3)
}

/// Wraps an angle into `[-180, 180)`.
pub fn wrap_degrees(deg: f64) -> f64 {
    let w = (deg + 180.0).rem_euclid(360.0) - 180.0;
    if w == -180.0 && deg > 0.0 {
        180.0
    } else {
        w
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn empty_power_sum_is_negative_infinity() {
        assert_eq!(db_sum(std::iter::empty()), f64::NEG_INFINITY);
    }

    #[test]
    fn equal_terms_add_three_db() {
        let s = db_sum([-100.0, -100.0]);
        assert!((s - (-100.0 + 10.0 * 2f64.log10())).abs() < 1e-12);
    }

    #[test]
    fn wrap() {
        assert_eq!(wrap_degrees(190.0), -170.0);
        assert_eq!(wrap_degrees(-190.0), 170.0);
        assert_eq!(wrap_degrees(540.0), 180.0);
        assert_eq!(wrap_degrees(45.0), 45.0);
    }
}
