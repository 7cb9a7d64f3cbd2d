use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Upper tolerance on probability-type values before they are flagged.
pub const PROBABILITY_SLACK: f64 = 1e-9;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum SeriesKind {
    Probability,
    Other,
}

/// Sampled (t, value) records with strictly increasing t.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TimeSeries {
    pub label: String,
    pub kind: SeriesKind,
    records: Vec<(f64, f64)>,
}

impl TimeSeries {
    pub fn new(label: impl Into<String>, kind: SeriesKind) -> Self {
        Self { label: label.into(), kind, records: Vec::new() }
    }

    pub fn from_records(
        label: impl Into<String>,
        kind: SeriesKind,
        records: impl IntoIterator<Item = (f64, f64)>,
    ) -> Result<Self> {
        let mut s = Self::new(label, kind);
        for (t, v) in records {
            s.push(t, v)?;
        }
        Ok(s)
    }

    pub fn push(&mut self, t: f64, value: f64) -> Result<()> {
        if !t.is_finite() {
            return Err(Error::param(format!("non-finite time {t}")));
        }
        if let Some(&(last, _)) = self.records.last() {
            if t <= last {
                return Err(Error::param(format!("times must increase strictly: {t} after {last}")));
            }
        }
        self.records.push((t, value));
        Ok(())
    }

    pub fn records(&self) -> &[(f64, f64)] {
        &self.records
    }

    pub fn times(&self) -> impl Iterator<Item = f64> + '_ {
        self.records.iter().map(|r| r.0)
    }

    pub fn values(&self) -> impl Iterator<Item = f64> + '_ {
        self.records.iter().map(|r| r.1)
    }

    pub fn len(&self) -> usize {
        self.records.len()
    }

    pub fn is_empty(&self) -> bool {
        self.records.is_empty()
    }

    /// Indices of probability values outside [0, 1 + slack]. Values are never clamped.
    pub fn flagged(&self) -> Vec<usize> {
        if self.kind != SeriesKind::Probability {
            return Vec::new();
        }
        self.records
            .iter()
            .enumerate()
            .filter(|(_, &(_, v))| !(0.0..=1.0 + PROBABILITY_SLACK).contains(&v))
            .map(|(i, _)| i)
            .collect()
    }
}

/// Escaped-atom momentum distribution, either on discrete box modes or sampled
/// from the continuum formula.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct MomentumSpectrum {
    /// (k, W(k)) pairs with increasing k.
    pub points: Vec<(f64, f64)>,
    /// Mode spacing Δk for discrete spectra.
    pub dk: Option<f64>,
}

impl MomentumSpectrum {
    /// Σ W Δk for discrete spectra, trapezoid in k otherwise.
    pub fn integral(&self) -> f64 {
        match self.dk {
            Some(dk) => self.points.iter().map(|p| p.1).sum::<f64>() * dk,
            None => self.points.windows(2).map(|w| 0.5 * (w[0].1 + w[1].1) * (w[1].0 - w[0].0)).sum(),
        }
    }

    /// k at the maximum of W, refined by a parabola through the neighbouring samples.
    pub fn peak(&self) -> Option<f64> {
        let (i, _) = self.points.iter().enumerate().max_by(|a, b| a.1 .1.total_cmp(&b.1 .1))?;
        if i == 0 || i + 1 >= self.points.len() {
            return Some(self.points[i].0);
        }
        let (k0, w0) = self.points[i - 1];
        let (k1, w1) = self.points[i];
        let (k2, w2) = self.points[i + 1];
        let denom = (k0 - k1) * (k0 - k2) * (k1 - k2);
        let a = (k2 * (w1 - w0) + k1 * (w0 - w2) + k0 * (w2 - w1)) / denom;
        let b = (k2 * k2 * (w0 - w1) + k1 * k1 * (w2 - w0) + k0 * k0 * (w1 - w2)) / denom;
        if a < 0.0 {
            Some(-b / (2.0 * a))
        } else {
            Some(k1)
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn strictly_increasing_times() {
        let mut s = TimeSeries::new("S", SeriesKind::Probability);
        s.push(0.1, 0.9).unwrap();
        assert!(s.push(0.1, 0.8).is_err());
        assert!(s.push(0.05, 0.8).is_err());
        s.push(0.2, 1.2).unwrap();
        s.push(0.3, -0.1).unwrap();
        assert_eq!(s.flagged(), vec![1, 2]);
    }

    #[test]
    fn spectrum_peak_and_integral() {
        let points: Vec<(f64, f64)> =
            (0..200).map(|i| i as f64 * 0.1).map(|k| (k, (-(k - 7.33f64).powi(2)).exp())).collect();
        let s = MomentumSpectrum { points: points.clone(), dk: None };
        assert!((s.peak().unwrap() - 7.33).abs() < 1e-2);
        assert!((s.integral() - std::f64::consts::PI.sqrt()).abs() < 1e-6);
        let d = MomentumSpectrum { points, dk: Some(0.1) };
        assert!((d.integral() - std::f64::consts::PI.sqrt()).abs() < 1e-6);
    }
}
