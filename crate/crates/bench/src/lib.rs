//! Benchmark workloads for the page computation.

use lieseq::gmodel::as_filtered;
use lieseq::samples;
use lieseq::spectral::FilteredComplex;
use lieseq::GModel;

/// Shipped models plus a couple of larger ones, filtered and ready to run.
pub fn workloads() -> Vec<(String, FilteredComplex)> {
    let mut models: Vec<(String, GModel)> = samples::shipped()
        .into_iter()
        .map(|(n, m)| (n.to_string(), m))
        .collect();
    models.push((
        "filiform4-over-torus2".into(),
        GModel::new(
            samples::filiform4(),
            samples::torus2(),
            vec![vec![lieseq::linalg::q(0); 4]; 4],
        )
        .expect("flat model"),
    ));
    models
        .into_iter()
        .map(|(n, m)| (n, as_filtered(&m).expect("filtration")))
        .collect()
}
