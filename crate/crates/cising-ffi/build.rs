fn main() {
    let crate_dir = std::env::var("CARGO_MANIFEST_DIR").expect("CARGO_MANIFEST_DIR");
    let out_path = std::path::Path::new(&crate_dir).join("include").join("cising.h");
    std::fs::create_dir_all(out_path.parent().unwrap()).expect("create include dir");

    let mut config = cbindgen::Config::default();
    config.language = cbindgen::Language::C;
    config.header = Some("/* C interface for the cising library. */".into());
    config.include_guard = Some("CISING_H".into());
    config.cpp_compat = true;
    config.documentation = true;
    // Bare variant names like `Ok` are collision bait in C.
    config.enumeration.prefix_with_name = true;

    match cbindgen::Builder::new()
        .with_crate(&crate_dir)
        .with_config(config)
        .generate()
    {
        Ok(bindings) => {
            bindings.write_to_file(&out_path);
        }
        Err(e) => {
            // Header generation is a convenience; never fail the build on it.
            println!("cargo:warning=cbindgen failed: {e}");
        }
    }
    println!("cargo:rerun-if-changed=src/lib.rs");
}
