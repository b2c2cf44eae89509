use pefem::threads::Threaded;
use pefem_core::analyze::{run_study, Domain, Preset, StudyPlan};
use pefem_core::exec::Serial;
use pefem_core::fem::FeSpace;
use pefem_core::pefem::{assemble, Method};

#[test]
fn threaded_assembly_matches_serial_bitwise() {
    let mesh = Domain::SquareHole.mesh(2).unwrap();
    let geo = Domain::SquareHole.geometry();
    let space = FeSpace::new(&mesh, 3).unwrap();
    for method in Method::ALL {
        let problem = Preset::NonconvexRational.problem(method, 3, 0);
        let a = assemble(method, &space, &problem, &geo, 10.0, &Serial).unwrap();
        let b = assemble(method, &space, &problem, &geo, 10.0, &Threaded::new(4)).unwrap();
        assert_eq!(a.matrix, b.matrix, "{method}");
        assert_eq!(a.rhs, b.rhs, "{method}");
    }
}

#[test]
fn threaded_study_matches_serial() {
    let plan = StudyPlan::new(Domain::Disk, Method::PefemNeumann, Preset::ConvexCos, 2, vec![1, 2, 3]);
    let a = run_study(&plan, &Serial).unwrap();
    let b = run_study(&plan, &Threaded::new(3)).unwrap();
    for (x, y) in a.levels.iter().zip(&b.levels) {
        assert_eq!(x.dofs, y.dofs);
        assert!((x.l2_error - y.l2_error).abs() <= 1e-12 * x.l2_error);
        assert!((x.h1_error - y.h1_error).abs() <= 1e-12 * x.h1_error);
    }
}
