fn main() {
    let crate_dir = std::env::var("CARGO_MANIFEST_DIR").expect("CARGO_MANIFEST_DIR is set");
    let header = std::path::Path::new(&crate_dir).join("include").join("seqrac.h");

    let config = cbindgen::Config {
        language: cbindgen::Language::C,
        include_guard: Some("SEQRAC_H".to_string()),
        cpp_compat: true,
        documentation: true,
        enumeration: cbindgen::EnumConfig {
            prefix_with_name: true,
            ..Default::default()
        },
        header: Some(
            "/* C interface to the seqrac simulator core. Generated; do not edit. */".to_string(),
        ),
        ..Default::default()
    };

    match cbindgen::Builder::new()
        .with_crate(&crate_dir)
        .with_config(config)
        .generate()
    {
        Ok(bindings) => {
            bindings.write_to_file(header);
        }
        // Keep `cargo build` usable while editing: an unparsable interim state
        // skips header regeneration instead of failing the whole build.
        Err(cbindgen::Error::ParseSyntaxError { .. }) => {}
        Err(e) => panic!("header generation failed: {e}"),
    }

    println!("cargo:rerun-if-changed=src/lib.rs");
}
