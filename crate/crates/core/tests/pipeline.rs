use biext::cli::{analyze, oracle_kernel, parse_problem, ConstantsOutcome};
use biext::cyclo::{psi, CycloMatrix};
use biext::ff::Field;
use biext::fourier::{change_of_basis, constants, verify_intertwiner, Direction};
use biext::heisenberg::{build_group, svn_rep, verify_homomorphism, verify_irreducible, Model};
use biext::kernel::{dimension_report, etale_kernel, joint_kernels, KernelOptions};
use biext::pairing::{check_nondegenerate, pairing_table, PairingTable};
use biext::skew::{parse_matrix, parse_poly};

#[test]
fn artin_schreier_end_to_end() {
    let r = analyze(&parse_problem("p=3 n=1 | [F - 1]").unwrap());
    assert!(r.all_passed(), "{}", r.summary_text());
    assert_eq!(r.dimensions.pi0_log_f, 1);
    let ConstantsOutcome::Supported(c) = &r.constants else { panic!("diagonal input") };
    assert_eq!((c.r, c.r_prime), (0, 1));
    assert_eq!(r.heisenberg.as_ref().unwrap().order, 27);
}

#[test]
fn zero_map_end_to_end() {
    let r = analyze(&parse_problem("p=5 | [0]").unwrap());
    assert!(r.all_passed());
    assert_eq!(r.dimensions.big_d, 2);
    let f = r.fourier.as_ref().unwrap();
    assert!(f.forward.as_ref().unwrap().is_identity());
    assert!(f.backward.as_ref().unwrap().is_identity());
}

#[test]
fn symmetric_input_end_to_end() {
    let r = analyze(&parse_problem("p=2 n=1 | [F + F^-1]").unwrap());
    assert!(r.all_passed());
    assert_eq!(r.dimensions.pi0_log_f, 2);
    let ConstantsOutcome::Supported(c) = &r.constants else { panic!() };
    assert_eq!((c.r, c.r_prime), (1, 1));
}

#[test]
fn block_diagonal_kernel_is_a_product() {
    let f2 = Field::prime(2).unwrap();
    let m = parse_matrix(&f2, "[F - 1, 0; 0, F - 1]").unwrap();
    let (k1, k2) = joint_kernels(&m, &KernelOptions::default()).unwrap();
    assert_eq!((k1.len(), k2.len(), k1.connected_dim()), (4, 4, 0));
    let t = pairing_table(&m, &k1, &k2).unwrap();
    assert!(check_nondegenerate(&t).nondegenerate);
    let single = parse_matrix(&f2, "[F - 1]").unwrap();
    let (s1, s2) = joint_kernels(&single, &KernelOptions::default()).unwrap();
    let ts = pairing_table(&single, &s1, &s2).unwrap();
    // B on the product is the sum of the blockwise pairings
    for i in 0..k1.len() {
        for j in 0..k2.len() {
            let (a, b) = (k1.points()[i].clone(), k2.points()[j].clone());
            let expect: u32 = (0..2)
                .map(|c| {
                    let x = s1.index_of(&[a[c].clone()]).unwrap();
                    let y = s2.index_of(&[b[c].clone()]).unwrap();
                    ts.value(x, y)
                })
                .sum::<u32>()
                % 2;
            assert_eq!(t.value(i, j), expect);
        }
    }
}

#[test]
fn column_map_has_one_dimensional_cokernel() {
    let f3 = Field::prime(3).unwrap();
    let m = parse_matrix(&f3, "[F - 1; 0]").unwrap();
    let dims = dimension_report(&m);
    assert_eq!((dims.k1, dims.k2, dims.pi0_log_f), (0, 1, 1));
    assert!(dims.identities_hold());
    let r = analyze(&parse_problem("p=3 | [F - 1; 0]").unwrap());
    assert!(r.all_passed(), "{}", r.summary_text());
}

#[test]
fn pinned_fourier_matrix() {
    let f3 = Field::prime(3).unwrap();
    let m = parse_matrix(&f3, "[F - 1]").unwrap();
    let (k1, k2) = joint_kernels(&m, &KernelOptions::default()).unwrap();
    let t = pairing_table(&m, &k1, &k2).unwrap();
    let c = constants(&m).unwrap();
    let fwd = change_of_basis(&t, 1, Some(&c), Direction::YFromX);
    let value = |k: &biext::kernel::KernelData, i: usize| k.points()[i][0].prime_value().unwrap() as i64;
    let expect = CycloMatrix::from_fn(3, 3, 3, |i, j| -&psi(3, value(&k1, i) * value(&k2, j)));
    assert_eq!(fwd, expect);
    let back = change_of_basis(&t, 1, Some(&c), Direction::XFromY);
    assert!(fwd.mul(&back).is_identity());
}

#[test]
fn oracle_agrees_with_etale_kernel() {
    let cases = [(2, 1, "F^2 + F + 1"), (3, 1, "F^2 - F - 1"), (3, 2, "(t)*F - 1"), (5, 1, "F^-1 + 2 + F"), (2, 2, "F^3 + (t)")];
    for (p, n, text) in cases {
        let field = Field::standard(p, n).unwrap();
        let f = parse_poly(&field, text).unwrap();
        let k = etale_kernel(&f, &KernelOptions::default()).unwrap();
        let s = k.field().n() / n;
        let o = oracle_kernel(&f, s as u32).unwrap();
        assert!(o.complete, "{text}");
        assert_eq!(o.kernel, k, "{text}");
    }
}

#[test]
fn heisenberg_models_on_a_product() {
    let f2 = Field::prime(2).unwrap();
    let m = parse_matrix(&f2, "[F - 1, 0; 0, F^2 + F + 1]").unwrap();
    let (k1, k2) = joint_kernels(&m, &KernelOptions::default()).unwrap();
    let t = pairing_table(&m, &k1, &k2).unwrap();
    let g = build_group(&k1, &k2, &t).unwrap();
    assert_eq!(g.order(), 8 * 8 * 2);
    for model in [Model::X, Model::Y] {
        let r = svn_rep(&g, model);
        assert!(verify_homomorphism(&r).holds());
        let c = verify_irreducible(&r).unwrap();
        assert_eq!(c.schur_sum as u64, g.order());
    }
    assert!(verify_intertwiner(&g, 1).holds());
}

#[test]
fn degenerate_control_is_rejected() {
    let t = PairingTable::from_values(3, 1, 1, vec![vec![0; 3]; 3]);
    let c = check_nondegenerate(&t);
    assert!(!c.nondegenerate && c.routes_agree);
}
