"""Smoke test for the vwpy extension module."""

import json

import vwpy


def main():
    text = vwpy.theta(2, 0, 4)
    assert text.startswith("1 + q(y + y^-1) + q^4(y^2 + y^-2)"), text

    assert vwpy.euler_specialization(2, 2) == "5"

    ok, report = vwpy.verify("klt", 2, 2, ell=1)
    assert ok, report
    ok, report = vwpy.verify("route-equality", 2, 1)
    assert ok, report

    series = json.loads(vwpy.extract(2, 2))
    assert series["r"] == 2 and "Abar" in series["series"]

    k3 = json.dumps({"chi": 2, "K2": 0, "gram": [[-2]], "K": [0],
                     "classes": [{"name": "0", "vector": [0], "sw": 1}], "c1": [0]})
    assert vwpy.partition_function(k3, 2, 1, closed_form=True) == vwpy.partition_function(k3, 2, 1)

    try:
        vwpy.partition_function("{\"chi\": 1}", 2, 1)
    except ValueError:
        pass
    else:
        raise AssertionError("malformed surface accepted")

    print("vwpy smoke test passed")


if __name__ == "__main__":
    main()
