use std::time::Instant;
use tcs_core::php_dual::{dual_report, PhpDual};
use tcs_core::ord_proofs::{build_ord_proof, build_sos_ord_proof, check_exactly_one_cover, verify_certificate};
use tcs_core::decimal::decimal_string;

fn main() {
    for n in [5u32, 6] {
        let t = Instant::now();
        let d = PhpDual::new(n);
        let (max_corr, _) = d.max_weakening_expectation();
        let dv = d.mean_closed() / &max_corr;
        println!("n={n} dual value = {} = {} in {:?}", dv, decimal_string(&dv, 3), t.elapsed());
    }
    let t = Instant::now();
    let r = dual_report(6);
    println!("report6: mean agree {} norm agree {} resfail agree {} conj {:?} in {:?}",
        r.mean.agree, r.norm_squared.agree, r.resolution_failure.agree, r.conjecture_match, t.elapsed());

    let t = Instant::now();
    let cert = build_ord_proof(7).unwrap();
    println!("ord7 built: entries={} tcs={} in {:?}", cert.entry_count(), cert.total_coefficient_size(), t.elapsed());
    let t = Instant::now();
    let ok = verify_certificate(&cert).unwrap().is_valid();
    let cover = check_exactly_one_cover(&cert).unwrap().is_valid();
    println!("ord7 verify={} cover={} in {:?}", ok, cover, t.elapsed());

    let t = Instant::now();
    let sos = build_sos_ord_proof(6).unwrap();
    let ok = verify_certificate(&sos).unwrap().is_valid();
    println!("sos6 verify={} tcs={} in {:?}", ok, sos.total_coefficient_size(), t.elapsed());
    let t = Instant::now();
    let sos7 = build_sos_ord_proof(7).unwrap();
    let ok = verify_certificate(&sos7).unwrap().is_valid();
    println!("sos7 verify={} tcs={} in {:?}", ok, sos7.total_coefficient_size(), t.elapsed());
}
