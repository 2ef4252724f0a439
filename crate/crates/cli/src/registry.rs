//! Every public operation and the item implementing it. Operations that
//! carry a formula must have a row in `FORMULAS.md`.

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Operation {
    pub module: &'static str,
    pub name: &'static str,
    /// Rust items, `crate::path::item`
    pub items: &'static [&'static str],
    /// true when the operation implements a formula rather than plumbing
    pub formula: bool,
}

const fn op(module: &'static str, name: &'static str, items: &'static [&'static str], formula: bool) -> Operation {
    Operation {
        module,
        name,
        items,
        formula,
    }
}

pub const OPERATIONS: &[Operation] = &[
    op("specfun", "jacobi", &["hyperloc::specfun::jacobi", "hyperloc::specfun::jacobi_y"], true),
    op("specfun", "laguerre", &["hyperloc::specfun::laguerre"], true),
    op("specfun", "bessel_j", &["hyperloc::specfun::bessel_j"], true),
    op("specfun", "log_gamma", &["hyperloc::specfun::log_gamma"], true),
    op("specfun", "pochhammer", &["hyperloc::specfun::pochhammer"], true),
    op("specfun", "spherical_harmonic", &["hyperloc::specfun::real_harmonic"], true),
    op("specfun", "build_sphere_quadrature", &["hyperloc::specfun::SphereQuadrature"], false),
    op(
        "geometry",
        "rho_to_r",
        &["hyperloc::geometry::Space::rho_to_r", "hyperloc::geometry::Space::r_to_rho"],
        true,
    ),
    op("geometry", "radial_schrodinger_residual", &["hyperloc::geometry::radial_schrodinger_residual"], true),
    op("geometry", "volume_weight", &["hyperloc::geometry::Space::volume_weight"], true),
    op("spectra", "potential", &["hyperloc::spectra::Operator::potential"], true),
    op("spectra", "eigenvalue", &["hyperloc::spectra::Operator::eigenvalue"], true),
    op("spectra", "admissible", &["hyperloc::spectra::Operator::admissible"], true),
    op("spectra", "radial_eigenfunction", &["hyperloc::spectra::Operator::radial"], true),
    op("spectra", "eigenfunction", &["hyperloc::spectra::Operator::eigenstate"], true),
    op(
        "spectra",
        "amplitude_constant",
        &["hyperloc::spectra::Operator::amplitude_constant", "hyperloc::spectra::Operator::amplitude_estimate"],
        true,
    ),
    op("spectra", "multiplicity", &["hyperloc::spectra::multiplicity"], true),
    op("helmholtz", "bessel_mode", &["hyperloc::helmholtz::bessel_mode"], true),
    op("helmholtz", "expand", &["hyperloc::helmholtz::expand"], true),
    op(
        "helmholtz",
        "evaluate_expansion",
        &["hyperloc::helmholtz::evaluate_expansion", "hyperloc::helmholtz::truncation_error"],
        true,
    ),
    op("helmholtz", "hyperbolic_radial_helmholtz", &["hyperloc::helmholtz::hyperbolic_radial_helmholtz"], true),
    op("helmholtz", "agmon_hormander_quotient", &["hyperloc::helmholtz::agmon_hormander_quotient"], true),
    op("localization", "plan", &["hyperloc::localization::plan"], true),
    op("localization", "synthesize", &["hyperloc::localization::synthesize"], true),
    op("localization", "localization_error", &["hyperloc::localization::localization_error"], true),
    op("localization", "convergence_study", &["hyperloc::localization::convergence_study"], true),
    op("heatkernel", "kernel", &["hyperloc::heatkernel::HeatKernel::value"], true),
    op(
        "heatkernel",
        "kernel_bound",
        &["hyperloc::heatkernel::KernelBound::value", "hyperloc::heatkernel::KernelBound::check"],
        true,
    ),
    op("heatkernel", "recurrence_up_check", &["hyperloc::heatkernel::recurrence_up_check"], true),
    op("heatkernel", "descent_check", &["hyperloc::heatkernel::descent_check"], true),
    op("heatkernel", "total_mass", &["hyperloc::heatkernel::total_mass"], true),
    op("heatkernel", "propagate_radial", &["hyperloc::heatkernel::Propagator::apply"], true),
    op("cli", "cmd_expand", &["hyperloc_cli::commands::run_expand"], true),
    op("cli", "cmd_localize", &["hyperloc_cli::commands::run_localize"], true),
    op(
        "cli",
        "cmd_heat",
        &["hyperloc_cli::commands::run_heat_kernel", "hyperloc_cli::commands::run_heat_solve"],
        true,
    ),
    op("cli", "cmd_verify", &["hyperloc_cli::checks::run_verify"], true),
    op("io_docs", "regress", &["hyperloc_cli::golden::regress"], false),
];

pub fn find(name: &str) -> Option<&'static Operation> {
    OPERATIONS.iter().find(|o| o.name == name)
}
