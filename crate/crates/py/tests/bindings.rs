use pyo3::prelude::*;
use pyo3::types::PyDict;

use defectlab_py::defectlab_py;

#[test]
fn module_round_trip() {
    pyo3::append_to_inittab!(defectlab_py);
    Python::initialize();
    Python::attach(|py| {
        let locals = PyDict::new(py);
        py.run(
            c"
import json
import defectlab_py as dl
names = dl.fixture_names()
pole = json.loads(dl.residues('ice-pole'))['residues'][0]['residue']['z']
ext = dl.ext('Z/4', 'Z/6')
cli = dl.run_cli(['residue', '--fixture', 'paths-poles'])
try:
    dl.fixture('nope')
    err = None
except ValueError as e:
    err = json.loads(str(e))['error']
",
            None,
            Some(&locals),
        )
        .unwrap();
        let get = |k: &str| locals.get_item(k).unwrap().unwrap();
        assert!(get("names").extract::<Vec<String>>().unwrap().contains(&"golden-mean-defect".to_string()));
        assert_eq!(get("pole").extract::<Vec<i64>>().unwrap(), vec![8]);
        assert_eq!(get("ext").extract::<String>().unwrap(), "Z/2");
        let (code, out): (i32, String) = get("cli").extract().unwrap();
        assert_eq!((code, out.lines().count()), (0, 3));
        assert_eq!(get("err").extract::<String>().unwrap(), "unknown-name");
    });
}
