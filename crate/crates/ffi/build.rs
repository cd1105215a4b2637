#[cfg(feature = "generate-header")]
fn main() {
    let crate_dir = std::env::var("CARGO_MANIFEST_DIR").unwrap();
    let config = cbindgen::Config::from_file("cbindgen.toml").unwrap();
    cbindgen::generate_with_config(&crate_dir, config)
        .expect("header generation failed")
        .write_to_file("include/isonlcs.h");
}

#[cfg(not(feature = "generate-header"))]
fn main() {}
