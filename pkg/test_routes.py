#!/usr/bin/env python3
"""
Test script to verify all routes work correctly, through Flask's test client
"""

import os
import sys

os.environ.setdefault('TORB_LOG_FILE', '')

from torb import create_app  # noqa: E402
from torb.services.job_manager import JobManager  # noqa: E402

T = "1 1; 0 1"
T_INV = "1 -1; 0 1"
P = [["2", "-1"], ["-1", "1"]]


def _client():
    app = create_app()
    app.config['TESTING'] = True
    return app, app.test_client()


def test_class_route():
    _, client = _client()
    response = client.post('/api/class', json={'matrix': T})
    assert response.status_code == 200
    assert response.get_json()['class'] == "1"

    response = client.post('/api/class', json={'matrix': "0 1; 1 0", 'oriented': False})
    assert response.status_code == 200
    assert response.get_json()['class'] == ["0", "1"]


def test_error_status_codes():
    _, client = _client()
    response = client.post('/api/class', json={'matrix': "0 1; 1 0"})
    assert response.status_code == 422
    assert "requires determinant +1" in response.get_json()['error']

    assert client.post('/api/class', json={'matrix': "2 0; 0 1"}).status_code == 400
    assert client.post('/api/class', data="not json", content_type='text/plain').status_code == 400
    assert client.post('/api/class', json={'oriented': True}).status_code == 400

    response = client.get('/api/nowhere')
    assert response.status_code == 404
    assert 'error' in response.get_json()


def test_cobordant_and_bound_routes():
    _, client = _client()
    response = client.post('/api/cobordant', json={'matrices': ["0 -1; 1 0", "0 1; 1 0"], 'oriented': False})
    assert response.status_code == 200
    assert response.get_json()['cobordant'] is False

    response = client.post('/api/bound', json={'matrices': [T, T_INV]})
    assert response.get_json()['bounds'] is True
    response = client.post('/api/bound', json={'matrices': [T]})
    assert response.get_json()['bounds'] is False


def test_decompose_and_normal_form_routes():
    _, client = _client()
    assert client.post('/api/decompose', json={'matrix': T}).get_json()['word'] == "B'A'"
    record = client.post('/api/normal-form', json={'matrix': T}).get_json()
    assert record['psl'] == ["b2", "a"]
    assert record['r_flag'] == "0"


def test_witness_and_check_routes():
    _, client = _client()
    for kind in ('commutators', 'squares'):
        response = client.post('/api/witness', json={'matrix': P, 'kind': kind})
        assert response.status_code == 200
        checked = client.post('/api/check', json=response.get_json())
        assert checked.get_json()['valid'] is True

    response = client.post('/api/witness', json={'matrix': T})
    assert response.status_code == 422


def test_build_cobordism_route():
    _, client = _client()
    response = client.post('/api/build-cobordism', json={'matrices': [T, T_INV]})
    assert response.status_code == 200
    record = response.get_json()
    assert record['genus_or_crosscaps'] == "0"
    assert client.post('/api/check', json=record).get_json()['valid'] is True

    response = client.post('/api/build-cobordism', json={'matrices': [T]})
    assert response.status_code == 422


def test_verify_route():
    _, client = _client()
    response = client.get('/api/verify')
    assert response.status_code == 200
    assert response.get_json()['passed'] is True


def test_genus_job():
    app, client = _client()
    response = client.post('/genus', json={'matrix': P, 'g_max': 2})
    assert response.status_code == 202
    job_id = response.get_json()['job_id']

    assert JobManager(app).wait(job_id, timeout=30)

    status = client.get(f'/status/{job_id}')
    assert status.status_code == 200
    assert status.get_json()['status'] == 'completed'

    results = client.get(f'/genus/{job_id}')
    assert results.status_code == 200
    assert results.get_json()['genus'] == "1"


def test_genus_job_validation():
    _, client = _client()
    assert client.post('/genus', json={'matrix': T}).status_code == 422
    assert client.post('/genus', json={'matrix': P, 'g_max': 0}).status_code == 400
    assert client.post('/genus', json={}).status_code == 400
    assert client.get('/status/no-such-job').status_code == 404
    assert client.get('/genus/no-such-job').status_code == 404


def test_amphichiral_route():
    _, client = _client()
    response = client.post('/api/amphichiral', json={'matrix': T})
    assert response.status_code == 200
    assert response.get_json()['amphichiral'] is False

    response = client.post('/api/amphichiral', json={'matrix': "-1 0; 0 -1"})
    assert response.get_json()['amphichiral'] is True
    assert response.get_json()['class'] == "6"


def test_finished_jobs_are_bounded():
    app, client = _client()
    app.config['MAX_FINISHED_JOBS'] = 2
    job_ids = []
    for _ in range(5):
        response = client.post('/genus', json={'matrix': P, 'g_max': 2})
        assert response.status_code == 202
        job_id = response.get_json()['job_id']
        assert JobManager(app).wait(job_id, timeout=30)
        job_ids.append(job_id)

    assert len(app.genus_jobs) <= 2
    assert len(app.genus_results) <= 2
    assert app.genus_threads == {}
    assert client.get(f'/genus/{job_ids[-1]}').status_code == 200
    assert client.get(f'/status/{job_ids[0]}').status_code == 404


TESTS = [
    test_class_route,
    test_error_status_codes,
    test_cobordant_and_bound_routes,
    test_decompose_and_normal_form_routes,
    test_witness_and_check_routes,
    test_build_cobordism_route,
    test_verify_route,
    test_genus_job,
    test_genus_job_validation,
    test_amphichiral_route,
    test_finished_jobs_are_bounded,
]


def main():
    """Main test function"""
    print("Testing torb Routes")
    print("=" * 30)

    passed = 0
    for test in TESTS:
        try:
            test()
            print(f"✅ {test.__name__}")
            passed += 1
        except Exception as e:
            print(f"❌ {test.__name__}: {str(e)}")

    print(f"\nRoute Test Results: {passed}/{len(TESTS)} tests passed")

    if passed == len(TESTS):
        print("✅ All routes are working correctly!")
    else:
        print("❌ Some routes failed. Check the application logs.")
    return 0 if passed == len(TESTS) else 1


if __name__ == "__main__":
    sys.exit(main())
