//! Saturation vapour pressure and vapour-pressure deficit, in kPa.

use crate::error::{CoreError, Result};

const SVP_SCALE_KPA: f64 = 0.6108;
const SVP_NUMERATOR: f64 = 17.27;
const SVP_OFFSET_C: f64 = 237.3;

/// Saturation vapour pressure over water at `t` °C.
pub fn saturation_vp(t: f64) -> Result<f64> {
    if !t.is_finite() || t <= -SVP_OFFSET_C {
        return Err(CoreError::Domain(format!(
            "temperature {t} °C outside saturation vapour pressure domain"
        )));
    }
    Ok(SVP_SCALE_KPA * (SVP_NUMERATOR * t / (t + SVP_OFFSET_C)).exp())
}

/// Daily vapour-pressure deficit from temperature extremes and the relative
/// humidity observed at the time of each extreme.
///
/// Humidity peaks when temperature bottoms out, so the humidity at `t_min`
/// acts as RH max (paired with saturation pressure at `t_min`) and the
/// humidity at `t_max` acts as RH min (paired with saturation at `t_max`).
pub fn vpd(t_max: f64, t_min: f64, rh_at_tmax: f64, rh_at_tmin: f64) -> Result<f64> {
    if !(t_max.is_finite() && t_min.is_finite()) || t_max < t_min {
        return Err(CoreError::Domain(format!(
            "invalid temperatures for VPD (t_max {t_max}, t_min {t_min})"
        )));
    }
    for (name, rh) in [("rh_at_tmax", rh_at_tmax), ("rh_at_tmin", rh_at_tmin)] {
        if !(0.0..=100.0).contains(&rh) {
            return Err(CoreError::Domain(format!("{name} {rh} outside [0, 100]")));
        }
    }
    let es_max = saturation_vp(t_max)?;
    let es_min = saturation_vp(t_min)?;
    let es_avg = (es_max + es_min) / 2.0;
    let rh_max = rh_at_tmin / 100.0;
    let rh_min = rh_at_tmax / 100.0;
    let actual = (es_min * rh_max + es_max * rh_min) / 2.0;
    Ok(es_avg - actual)
}
