macro_rules! example {
    ($name:ident, $file:literal) => {
        #[allow(dead_code)]
        mod $name {
            include!($file);
        }

        #[test]
        fn $name() {
            $name::run_example();
        }
    };
}

example!(coherence, "../examples/coherence.rs");
example!(classical, "../examples/classical.rs");
example!(initiality, "../examples/initiality.rs");
example!(per_quotient, "../examples/per_quotient.rs");
example!(presheaf, "../examples/presheaf.rs");
example!(factorization, "../examples/factorization.rs");
example!(lifting, "../examples/lifting.rs");
example!(recovery, "../examples/recovery.rs");
example!(cube, "../examples/cube.rs");
example!(json_files, "../examples/json_files.rs");
