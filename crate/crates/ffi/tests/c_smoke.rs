//! Compiles a small C program against the generated header and static
//! library. Skipped when no C compiler is available.

use std::path::PathBuf;
use std::process::Command;

const PROGRAM: &str = r#"
#include <stdio.h>
#include "lwe_prng.h"

int main(void) {
    uint8_t seed[LWE_PRNG_SEED_LEN] = {7};
    LwePrng *h = NULL;
    if (lwe_prng_new(seed, sizeof seed, 0, &h) != LWE_PRNG_STATUS_OK) return 2;
    uint8_t buf[16];
    if (lwe_prng_next_bytes(h, buf, sizeof buf) != LWE_PRNG_STATUS_OK) return 3;
    for (size_t i = 0; i < sizeof buf; i++) printf("%02x", buf[i]);
    printf("\n");
    lwe_prng_free(h);
    if (lwe_prng_new(seed, 3, 0, &h) != LWE_PRNG_STATUS_INVALID_SEED_LENGTH) return 4;
    return 0;
}
"#;

#[test]
fn c_program_links_and_runs() {
    let Some(cc) = ["cc", "clang", "gcc"].into_iter().find(|c| Command::new(c).arg("--version").output().is_ok())
    else {
        eprintln!("no C compiler; skipping");
        return;
    };
    // target/<profile>/deps/<test> -> target/<profile>
    let profile_dir = std::env::current_exe().unwrap().parent().unwrap().parent().unwrap().to_path_buf();
    let lib = profile_dir.join("liblwe_prng_ffi.a");
    if !lib.exists() {
        eprintln!("{} not built; skipping", lib.display());
        return;
    }
    let tmp = tempfile::tempdir().unwrap();
    let dir = tmp.path();
    let src = dir.join("smoke.c");
    let exe = dir.join("smoke");
    std::fs::write(&src, PROGRAM).unwrap();
    let include = PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("include");
    let status = Command::new(cc)
        .arg(&src)
        .arg("-I")
        .arg(&include)
        .arg(&lib)
        .args(["-lpthread", "-ldl", "-lm", "-o"])
        .arg(&exe)
        .status()
        .unwrap();
    assert!(status.success());
    let out = Command::new(&exe).output().unwrap();
    assert!(out.status.success(), "exit {:?}", out.status.code());
    let mut seed = [0u8; 32];
    seed[0] = 7;
    let mut g = lwe_prng::PrngState::new(&lwe_prng::EntropyInput::new(seed), &lwe_prng::default_params(), 0).unwrap();
    let want: String = g.next_bytes(16).unwrap().iter().map(|b| format!("{b:02x}")).collect();
    assert_eq!(String::from_utf8(out.stdout).unwrap().trim(), want);
}
