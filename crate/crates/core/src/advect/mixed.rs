use crate::grid::Field2D;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Phase {
    SemiLagrangian,
    FiniteDifference,
}

impl Phase {
    pub fn name(self) -> &'static str {
        match self {
            Phase::SemiLagrangian => "sl",
            Phase::FiniteDifference => "fd",
        }
    }
}

/// State of the one-way semi-Lagrangian to finite-difference switch.
#[derive(Debug, Clone, PartialEq)]
pub struct MixedState {
    pub phase: Phase,
    /// Largest tolerated change of mass between consecutive steps, `h^3`.
    pub threshold: f64,
    /// Mass drift that triggered the switch, if it happened.
    pub trigger: Option<f64>,
}

impl MixedState {
    /// Starts in the semi-Lagrangian phase; `h` is the smallest space step.
    pub fn new(h: f64) -> Self {
        Self {
            phase: Phase::SemiLagrangian,
            threshold: h.powi(3),
            trigger: None,
        }
    }

    /// Applies the switching rule to the masses of two consecutive time levels.
    pub fn observe_masses(&mut self, mass_prev: f64, mass_curr: f64) -> Phase {
        let drift = (mass_curr - mass_prev).abs();
        if self.phase == Phase::SemiLagrangian && drift > self.threshold {
            self.phase = Phase::FiniteDifference;
            self.trigger = Some(drift);
        }
        self.phase
    }
}

/// Switches to finite differences once `|mass(f_curr) - mass(f_prev)| > h^3`; never back.
pub fn mixed_controller(state: &mut MixedState, f_prev: &Field2D, f_curr: &Field2D) -> Phase {
    state.observe_masses(f_prev.mass(), f_curr.mass())
}
