//! Anti-noise low-pass filtering applied before wavelet analysis.
//!
//! [`design_butterworth_lowpass`] builds an even-order digital Butterworth
//! filter as a cascade of second-order sections (bilinear transform with
//! cutoff pre-warping). [`filtfilt`] applies it forward and backward with
//! reflective edge padding, so the effective magnitude response is |H|² and
//! the phase response is zero — wavelet coefficients are not shifted between
//! windows.

use thiserror::Error;

#[derive(Debug, Error)]
pub enum FilterError {
    #[error("filter order must be even and within 2..=12, got {0}")]
    InvalidOrder(usize),
    #[error("cutoff {cutoff_hz} Hz outside (0, {nyquist}) for fs = {fs} Hz")]
    InvalidCutoff { cutoff_hz: f64, fs: f64, nyquist: f64 },
    #[error("signal too short for zero-phase filtering: {len} samples, need more than {min}")]
    SignalTooShort { len: usize, min: usize },
}

/// One second-order section with the feedback side normalized to a0 = 1:
/// y[n] = b0·x[n] + b1·x[n−1] + b2·x[n−2] − a1·y[n−1] − a2·y[n−2].
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct BiquadSection {
    pub b0: f64,
    pub b1: f64,
    pub b2: f64,
    pub a1: f64,
    pub a2: f64,
}

impl BiquadSection {
    /// Both poles strictly inside the unit circle.
    pub fn is_stable(&self) -> bool {
        self.a2.abs() < 1.0 && self.a1.abs() < 1.0 + self.a2
    }

    /// Complex frequency response at normalized angular frequency `w`.
    fn response_at(&self, w: f64) -> (f64, f64) {
        let (c1, s1) = (w.cos(), -w.sin());
        let (c2, s2) = ((2.0 * w).cos(), -(2.0 * w).sin());
        let num = (self.b0 + self.b1 * c1 + self.b2 * c2, self.b1 * s1 + self.b2 * s2);
        let den = (1.0 + self.a1 * c1 + self.a2 * c2, self.a1 * s1 + self.a2 * s2);
        let d = den.0 * den.0 + den.1 * den.1;
        (
            (num.0 * den.0 + num.1 * den.1) / d,
            (num.1 * den.0 - num.0 * den.1) / d,
        )
    }
}

/// An even-order low-pass filter realized as cascaded second-order sections.
#[derive(Debug, Clone, PartialEq)]
pub struct BiquadCascade {
    sections: Vec<BiquadSection>,
    order: usize,
    cutoff_hz: f64,
    fs: f64,
    dc_gain: f64,
}

impl BiquadCascade {
    pub fn sections(&self) -> &[BiquadSection] {
        &self.sections
    }

    pub fn order(&self) -> usize {
        self.order
    }

    pub fn cutoff_hz(&self) -> f64 {
        self.cutoff_hz
    }

    pub fn fs(&self) -> f64 {
        self.fs
    }

    pub fn dc_gain(&self) -> f64 {
        self.dc_gain
    }

    /// Samples the impulse response needs to settle, fixed at 6 × order.
    pub fn settle_len(&self) -> usize {
        6 * self.order
    }

    /// Magnitude response |H(e^{jω})| at `freq_hz`, evaluated directly from
    /// the section coefficients.
    pub fn magnitude_at(&self, freq_hz: f64) -> f64 {
        let w = 2.0 * std::f64::consts::PI * freq_hz / self.fs;
        let mut re = 1.0;
        let mut im = 0.0;
        for s in &self.sections {
            let (sr, si) = s.response_at(w);
            let (nr, ni) = (re * sr - im * si, re * si + im * sr);
            re = nr;
            im = ni;
        }
        (re * re + im * im).sqrt()
    }

    /// Single forward pass over `x` with zero initial state
    /// (direct form II transposed, section by section).
    pub fn filter(&self, x: &[f64]) -> Vec<f64> {
        let mut y = x.to_vec();
        for s in &self.sections {
            let mut z1 = 0.0;
            let mut z2 = 0.0;
            for v in y.iter_mut() {
                let input = *v;
                let out = s.b0 * input + z1;
                z1 = s.b1 * input - s.a1 * out + z2;
                z2 = s.b2 * input - s.a2 * out;
                *v = out;
            }
        }
        y
    }
}

/// Design a digital Butterworth low-pass of even `order` with −3 dB point at
/// `cutoff_hz`, via the bilinear transform with cutoff pre-warping.
pub fn design_butterworth_lowpass(
    order: usize,
    cutoff_hz: f64,
    fs: f64,
) -> Result<BiquadCascade, FilterError> {
    if !(2..=12).contains(&order) || !order.is_multiple_of(2) {
        return Err(FilterError::InvalidOrder(order));
    }
    let nyquist = fs / 2.0;
    if !(cutoff_hz > 0.0 && cutoff_hz < nyquist) {
        return Err(FilterError::InvalidCutoff { cutoff_hz, fs, nyquist });
    }

    let wc = (std::f64::consts::PI * cutoff_hz / fs).tan();
    let wc2 = wc * wc;
    let n = order as f64;

    let mut sections = Vec::with_capacity(order / 2);
    for k in 0..order / 2 {
        // analog prototype pole pair at angle θ from the imaginary axis:
        // s² + 2 sin(θ)·s + 1, frequency-scaled by wc
        let theta = std::f64::consts::PI * (2 * k + 1) as f64 / (2.0 * n);
        let two_sin = 2.0 * theta.sin();
        let d = 1.0 + two_sin * wc + wc2;
        sections.push(BiquadSection {
            b0: wc2 / d,
            b1: 2.0 * wc2 / d,
            b2: wc2 / d,
            a1: 2.0 * (wc2 - 1.0) / d,
            a2: (1.0 - two_sin * wc + wc2) / d,
        });
    }

    let mut cascade = BiquadCascade {
        sections,
        order,
        cutoff_hz,
        fs,
        dc_gain: 1.0,
    };
    cascade.dc_gain = cascade.magnitude_at(0.0);
    debug_assert!(cascade.sections.iter().all(BiquadSection::is_stable));
    Ok(cascade)
}

/// Zero-phase filtering: forward pass, backward pass, with odd-reflection
/// edge padding of 3 × settle length on each side. Output length equals the
/// input length and the effective magnitude response is |H|².
pub fn filtfilt(cascade: &BiquadCascade, x: &[f64]) -> Result<Vec<f64>, FilterError> {
    let pad = 3 * cascade.settle_len();
    if x.len() <= pad {
        return Err(FilterError::SignalTooShort {
            len: x.len(),
            min: pad,
        });
    }
    let n = x.len();

    // odd reflection about the edge value keeps level and slope continuous
    let mut ext = Vec::with_capacity(n + 2 * pad);
    let first = x[0];
    for i in (1..=pad).rev() {
        ext.push(2.0 * first - x[i]);
    }
    ext.extend_from_slice(x);
    let last = x[n - 1];
    for i in 1..=pad {
        ext.push(2.0 * last - x[n - 1 - i]);
    }

    let mut y = cascade.filter(&ext);
    y.reverse();
    let mut y = cascade.filter(&y);
    y.reverse();

    Ok(y[pad..pad + n].to_vec())
}
