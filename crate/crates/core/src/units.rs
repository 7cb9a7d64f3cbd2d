//! Conversion between the natural units used internally (ħ = M = a = 1,
//! so that t0 = M a² = 1) and SI seconds for a concrete atomic species.

use crate::error::{Error, Result};

/// Reduced Planck constant, J·s (CODATA 2018, exact).
pub const HBAR: f64 = 1.054_571_817e-34;
/// Unified atomic mass unit, kg (CODATA 2018).
pub const ATOMIC_MASS_UNIT: f64 = 1.660_539_066_60e-27;

#[derive(Debug, Clone, PartialEq)]
pub struct PhysicalSpecies {
    pub name: String,
    /// Mass in kilograms.
    pub mass: f64,
}

impl PhysicalSpecies {
    pub fn new(name: impl Into<String>, mass: f64) -> Result<Self> {
        if !(mass > 0.0 && mass.is_finite()) {
            return Err(Error::param(format!("species mass must be positive, got {mass}")));
        }
        Ok(Self { name: name.into(), mass })
    }

    fn from_amu(name: &str, amu: f64) -> Self {
        Self { name: name.to_string(), mass: amu * ATOMIC_MASS_UNIT }
    }

    pub fn rb85() -> Self {
        Self::from_amu("Rb-85", 84.911_789_738)
    }

    pub fn rb87() -> Self {
        Self::from_amu("Rb-87", 86.909_180_527)
    }

    pub fn na23() -> Self {
        Self::from_amu("Na-23", 22.989_769_282)
    }

    pub fn table() -> Vec<Self> {
        vec![Self::rb85(), Self::rb87(), Self::na23()]
    }

    /// Case-insensitive lookup; `Rb` and `Na` resolve to Rb-85 and Na-23.
    pub fn lookup(name: &str) -> Result<Self> {
        let key = name.trim().to_ascii_lowercase().replace(['-', '_'], "");
        match key.as_str() {
            "rb85" | "rb" => Ok(Self::rb85()),
            "rb87" => Ok(Self::rb87()),
            "na23" | "na" => Ok(Self::na23()),
            _ => Err(Error::param(format!("unknown species '{name}'"))),
        }
    }
}

/// Natural time unit t0 = M a² / ħ in seconds.
pub fn t0_physical(species: &PhysicalSpecies, a: f64) -> Result<f64> {
    if !(a > 0.0 && a.is_finite()) {
        return Err(Error::param(format!("trap width must be positive, got {a}")));
    }
    Ok(species.mass * a * a / HBAR)
}

/// Time conversion for a fixed species and trap width.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TimeScale {
    t0_seconds: f64,
}

impl TimeScale {
    pub fn new(species: &PhysicalSpecies, a: f64) -> Result<Self> {
        Ok(Self { t0_seconds: t0_physical(species, a)? })
    }

    pub fn t0_seconds(&self) -> f64 {
        self.t0_seconds
    }

    pub fn to_seconds(&self, t_natural: f64) -> f64 {
        t_natural * self.t0_seconds
    }

    pub fn to_natural(&self, seconds: f64) -> f64 {
        seconds / self.t0_seconds
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn t0_for_reference_species() {
        let rb = t0_physical(&PhysicalSpecies::rb85(), 80e-6).unwrap();
        let na = t0_physical(&PhysicalSpecies::na23(), 80e-6).unwrap();
        assert!((rb / 8.59 - 1.0).abs() < 0.02, "{rb}");
        assert!((na / 2.32 - 1.0).abs() < 0.02, "{na}");
        // Rb-87 is noticeably further from the quoted value.
        let rb87 = t0_physical(&PhysicalSpecies::rb87(), 80e-6).unwrap();
        assert!(rb87 > 8.7);
    }

    #[test]
    fn quadratic_in_width() {
        for s in PhysicalSpecies::table() {
            let t1 = t0_physical(&s, 3e-5).unwrap();
            let t2 = t0_physical(&s, 6e-5).unwrap();
            assert!((t2 / t1 - 4.0).abs() < 1e-12);
        }
    }

    #[test]
    fn rejects_bad_width_and_species() {
        assert!(t0_physical(&PhysicalSpecies::na23(), 0.0).is_err());
        assert!(PhysicalSpecies::lookup("Cs-133").is_err());
        assert!(PhysicalSpecies::new("x", -1.0).is_err());
        assert_eq!(PhysicalSpecies::lookup("rb").unwrap().name, "Rb-85");
    }

    #[test]
    fn round_trip() {
        let ts = TimeScale::new(&PhysicalSpecies::rb85(), 80e-6).unwrap();
        for &t in &[1e-6, 0.0427, 0.418, 3.0] {
            let back = ts.to_natural(ts.to_seconds(t));
            assert!(((back - t) / t).abs() < 1e-12);
        }
    }
}
