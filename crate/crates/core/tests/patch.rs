use pefem_core::analyze::{patch_test, run_study, Domain, Preset, StudyPlan, PATCH_TOL};
use pefem_core::exec::Serial;
use pefem_core::pefem::Method;

const PE_METHODS: [Method; 3] = [Method::PefemDirichletWeak, Method::PefemDirichletStrong, Method::PefemNeumann];

#[test]
fn every_pe_method_reproduces_polynomials_of_its_degree() {
    for domain in [Domain::Disk, Domain::SquareHole] {
        let mesh = domain.mesh(1).unwrap();
        let geo = domain.geometry();
        for method in PE_METHODS {
            for k in 1..=4 {
                let out = patch_test(&mesh, &geo, method, k, 7 + k as u64, &Serial).unwrap();
                assert!(out.passed, "{domain} {method} k={k}: relative H1 error {:e}", out.relative());
            }
        }
    }
}

#[test]
fn linear_solution_is_kept_by_the_standard_method() {
    // k = 1 has nodes only at vertices, where η(ξ) = ξ
    let mesh = Domain::Disk.mesh(1).unwrap();
    let out = patch_test(&mesh, &Domain::Disk.geometry(), Method::Standard, 1, 3, &Serial).unwrap();
    assert!(out.relative() <= PATCH_TOL);
}

#[test]
fn standard_method_fails_the_quadratic_patch_test() {
    let mesh = Domain::Disk.mesh(1).unwrap();
    let out = patch_test(&mesh, &Domain::Disk.geometry(), Method::Standard, 2, 11, &Serial).unwrap();
    assert!(!out.passed, "standard FEM should not reproduce a quadratic on Ω_h: {:e}", out.relative());
}

#[test]
fn patch_study_reports_pass() {
    let plan = StudyPlan::new(Domain::SquareHole, Method::PefemNeumann, Preset::Patch, 4, vec![0, 1]);
    let report = run_study(&plan, &Serial).unwrap();
    let gate = report.gate();
    assert!(gate.passed, "{}", gate.detail);
    assert!(report.levels.iter().all(|l| l.h1_error <= PATCH_TOL * l.scale));
}
