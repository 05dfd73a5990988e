#![no_main]

use libfuzzer_sys::fuzz_target;
use prm_hull::field::is_prime;
use prm_hull::report::parse_modulus;
use prm_hull::FieldSpec;

fuzz_target!(|data: &[u8]| {
    let Ok(text) = std::str::from_utf8(data) else { return };
    let Ok(coeffs) = parse_modulus(text) else { return };
    if !(2..=9).contains(&coeffs.len()) {
        return;
    }
    // smallest prime above every coefficient, kept small so fields stay cheap
    let lo = coeffs.iter().copied().max().unwrap_or(0).saturating_add(1).max(2);
    let Some(p) = (lo..lo.saturating_add(64)).take_while(|&p| p < 128).find(|&p| is_prime(p)) else { return };
    if let Ok(f) = FieldSpec::new(p, coeffs.len() as u32 - 1, Some(&coeffs)) {
        assert_eq!(f.modulus(), &coeffs[..]);
        assert_eq!(f.q(), p.pow(coeffs.len() as u32 - 1));
    }
});
