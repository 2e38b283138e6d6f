//! Built-in benchmark suites.

use std::path::PathBuf;

use fadmm::solver::Variant;

use crate::config::{App, AppParams, Budget, DatasetSpec, RunSpec, SolverParams, Sweep};

pub const DEFAULT_BENCH_DATASET: &str = "randn-100-300";

/// Spec for `suite` on `dataset`: FDA over `ρ ∈ {10, 100, 1000}`, SRM with
/// the default portfolio count, recovery over the six `(ρ₁, ρ₂)` pairs with
/// `ρ₁ ∈ {10, 100}`, `ρ₂ ∈ {1, 10, 100}`.
pub fn suite_spec(suite: App, dataset: &str, out: PathBuf, seed: u64, budget: Budget) -> RunSpec {
    let mut params = AppParams::default();
    match suite {
        App::Fda => {
            params.r = Some(crate::config::DEFAULT_FDA_R);
            params.rho = Some(Sweep::Many(vec![10.0, 100.0, 1000.0]));
        }
        App::Srm => params.portfolios = Some(fadmm::apps::SRM_DEFAULT_P),
        App::Recovery => {
            params.rho0 = Some(Sweep::One(f64::INFINITY));
            params.rho1 = Some(Sweep::Many(vec![10.0, 10.0, 10.0, 100.0, 100.0, 100.0]));
            params.rho2 = Some(Sweep::Many(vec![1.0, 10.0, 100.0, 1.0, 10.0, 100.0]));
        }
    }
    RunSpec {
        app: suite,
        tag: None,
        variants: Variant::ALL.to_vec(),
        seed,
        output_dir: out,
        dataset: DatasetSpec {
            name: dataset.to_string(),
            seed,
            path: None,
            data_dir: PathBuf::from("data"),
        },
        budget,
        solver: SolverParams {
            chi: Some(fadmm::solver::chi_lower_bound(1.0) + 1e-5),
            ..SolverParams::default()
        },
        params,
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::config::parse_config;

    #[test]
    fn suites_are_valid_specs() {
        for app in [App::Fda, App::Srm, App::Recovery] {
            let spec = suite_spec(app, "randn-10-6", "o".into(), 1, Budget::default());
            assert_eq!(parse_config(&spec.to_toml()).unwrap(), spec);
        }
        let rec = suite_spec(App::Recovery, "randn-10-6", "o".into(), 1, Budget::default());
        assert_eq!(rec.instances().len(), 6);
    }
}
