//! Outer boundary data and fracture tip conditions.

use crate::network::{PieceEnd, Side, TipCondition};

/// Condition on one side of the outer boundary.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum BoundaryCondition {
    /// Prescribed pressure.
    Pressure(f64),
    /// Prescribed normal flux density `u . n` (outward normal); the boundary
    /// velocities are eliminated from the system.
    Flux(f64),
}

impl BoundaryCondition {
    pub fn is_flux(&self) -> bool {
        matches!(self, BoundaryCondition::Flux(_))
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct BoundarySpec {
    pub left: BoundaryCondition,
    pub right: BoundaryCondition,
    pub bottom: BoundaryCondition,
    pub top: BoundaryCondition,
}

impl BoundarySpec {
    pub fn side(&self, side: Side) -> BoundaryCondition {
        match side {
            Side::Left => self.left,
            Side::Right => self.right,
            Side::Bottom => self.bottom,
            Side::Top => self.top,
        }
    }

    /// Homogeneous pressure on all four sides.
    pub fn zero_pressure() -> Self {
        let p = BoundaryCondition::Pressure(0.0);
        Self {
            left: p,
            right: p,
            bottom: p,
            top: p,
        }
    }

    pub fn any_pressure(&self) -> bool {
        Side::ALL.iter().any(|&s| !self.side(s).is_flux())
    }
}

/// Resolved condition at a fracture tip.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum TipBc {
    Pressure(f64),
    /// Total flux leaving the fracture through the tip; the tip velocity is
    /// eliminated.
    Flux(f64),
}

/// Resolves the condition at a piece end. Junction ends have none.
///
/// Tips on the outer boundary without an explicit condition inherit the
/// condition of the side they touch; a flux density is multiplied by the
/// aperture at the tip.
pub fn resolve_tip(
    end: PieceEnd,
    explicit: Option<TipCondition>,
    boundary: &BoundarySpec,
    aperture: f64,
) -> Option<TipBc> {
    match end {
        PieceEnd::Junction(_) => None,
        PieceEnd::Immersed => Some(TipBc::Flux(0.0)),
        PieceEnd::Boundary(side) => Some(match explicit {
            Some(TipCondition::DirichletPressure(p)) => TipBc::Pressure(p),
            Some(TipCondition::ZeroFlux) => TipBc::Flux(0.0),
            Some(TipCondition::Interior) | None => match boundary.side(side) {
                BoundaryCondition::Pressure(p) => TipBc::Pressure(p),
                BoundaryCondition::Flux(g) => TipBc::Flux(g * aperture),
            },
        }),
    }
}
