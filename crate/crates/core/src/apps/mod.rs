//! The three applications: sparse FDA, robust sparse recovery, robust SRM.

mod builders;
mod dataset;

pub use builders::{
    build_fda, build_recovery, build_srm, class_stats, ClassStats, FdaInstance, RecoveryInstance,
    SrmInstance, FDA_BETA0_PER_RHO, RECOVERY_BETA0, SRM_BETA0, SRM_DEFAULT_P,
};
pub use dataset::{gen_randn, load_libsvm, parse_libsvm, write_libsvm, Dataset, LibsvmData};

/// Cache location of a named dataset: `<root>/<name>.libsvm`.
pub fn cache_path(root: &std::path::Path, name: &str) -> std::path::PathBuf {
    root.join(format!("{name}.libsvm"))
}
