pub mod error;
pub mod poly;
pub mod words;

pub use error::{Error, Result};
pub mod spectral;

/// `x` rounded to twelve significant digits; serialised floats go through
/// this so repeated runs print identical JSON.
pub fn round12(x: f64) -> f64 {
    if !x.is_finite() || x == 0.0 {
        return x;
    }
    format!("{:.11e}", x).parse().unwrap()
}

/// Twelve significant digits, the fixed float format of text output.
pub fn format_float(x: f64) -> String {
    if !x.is_finite() {
        return x.to_string();
    }
    if x == 0.0 {
        return "0".into();
    }
    let s = format!("{:.11e}", x);
    let v: f64 = s.parse().unwrap();
    let mag = v.abs().log10().floor() as i32;
    if (-5..15).contains(&mag) {
        let decimals = (11 - mag).max(0) as usize;
        let t = format!("{:.*}", decimals, v);
        if t.contains('.') {
            t.trim_end_matches('0').trim_end_matches('.').to_string()
        } else {
            t
        }
    } else {
        s
    }
}

/// Serde helper writing an `f64` through [`round12`]; non-finite values
/// become `null`.
pub fn ser_round12<S: serde::Serializer>(x: &f64, s: S) -> std::result::Result<S::Ok, S::Error> {
    if x.is_finite() {
        s.serialize_f64(round12(*x))
    } else {
        s.serialize_none()
    }
}
pub mod escape;
pub mod experiments;
pub mod cli;
