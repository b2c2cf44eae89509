use pefem_core::analyze::{error_norms, fit_rate, run_study, solve, Domain, Preset, StudyPlan};
use pefem_core::exec::Serial;
use pefem_core::fem::FeSpace;
use pefem_core::pefem::{assemble_standard_dirichlet, Method, StandardBoundaryData};

#[test]
fn linear_standard_elements_are_second_order() {
    let plan = StudyPlan::new(Domain::Disk, Method::Standard, Preset::ConvexCos, 1, (0..5).collect());
    let report = run_study(&plan, &Serial).unwrap();
    let gate = report.gate();
    assert!(gate.passed, "{}", gate.detail);
}

fn tail_l2_slope(data: StandardBoundaryData, k: usize) -> f64 {
    let geo = Domain::Disk.geometry();
    let problem = Preset::ConvexCos.problem(Method::Standard, k, 0);
    let exact = problem.exact.as_ref().unwrap();
    let mut points = Vec::new();
    for level in 2..5 {
        let mesh = Domain::Disk.mesh(level).unwrap();
        let space = FeSpace::new(&mesh, k).unwrap();
        let sys = assemble_standard_dirichlet(&space, &problem, &geo, data, &Serial).unwrap();
        let u = solve(&sys).unwrap();
        points.push((mesh.h(), error_norms(&space, &u, exact, &Serial).unwrap().l2));
    }
    fit_rate(&points).unwrap().slope
}

#[test]
fn cap_comes_from_boundary_data_on_the_polygon() {
    // g_D moved from Γ to the nodes of Γ_h caps the rate; the smooth
    // extension of u evaluated at those nodes does not
    let projected = tail_l2_slope(StandardBoundaryData::Projected, 2);
    let extended = tail_l2_slope(StandardBoundaryData::Extended, 2);
    assert!((1.8..=2.5).contains(&projected), "{projected}");
    assert!(extended > 2.75, "{extended}");
}
