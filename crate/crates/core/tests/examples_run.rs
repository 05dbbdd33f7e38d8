macro_rules! example {
    ($name:ident) => {
        mod $name {
            include!(concat!(env!("CARGO_MANIFEST_DIR"), "/examples/", stringify!($name), ".rs"));
        }

        #[test]
        fn $name() {
            $name::run_example().unwrap();
        }
    };
}

example!(special_functions);
example!(recurrence_table);
example!(discrete_system);
example!(toda_flow);
example!(riccati_seed);
example!(painleve_chain);
example!(painleve_flow);
example!(beta_one);
example!(painleve_three);
example!(verify_report);
example!(scan_csv);
