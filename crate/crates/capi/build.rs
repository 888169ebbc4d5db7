use std::env;
use std::path::PathBuf;

fn main() {
    let crate_dir = PathBuf::from(env::var("CARGO_MANIFEST_DIR").unwrap());
    let header = crate_dir.join("include").join("eigenineq.h");
    std::fs::create_dir_all(header.parent().unwrap()).unwrap();
    match cbindgen::generate(&crate_dir) {
        Ok(bindings) => {
            bindings.write_to_file(&header);
        }
        Err(cbindgen::Error::ParseSyntaxError { .. }) => {
            // let the subsequent rustc invocation report the real error
        }
        Err(e) => panic!("cbindgen failed: {e:?}"),
    }
    println!("cargo:rerun-if-changed=src/lib.rs");
    println!("cargo:rerun-if-changed=cbindgen.toml");
}
