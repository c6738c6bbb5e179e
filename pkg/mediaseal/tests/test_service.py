# Copyright 2026 MediaSeal contributors
# License LGPL-3.0 or later (http://www.gnu.org/licenses/lgpl.html)

import base64
import json
import unittest
from unittest import mock

import requests

from ..exception import NetworkError, RegistryError
from ..models import canonical
from ..models import trust as trust_model
from ..models.container import serialize_asset
from ..models.fingerprint import compute_fingerprint
from ..registry.rate_limit import TokenBucket
from ..registry.service import create_app
from ..registry.store import FaultInjection
from .common import MediaSealComponentCase, photo_asset

TOKEN = "s3cret"


class FakeClock:
    def __init__(self):
        self.now = 0.0

    def __call__(self):
        return self.now


class TestTokenBucket(unittest.TestCase):
    def setUp(self):
        super().setUp()
        self.clock = FakeClock()
        self.bucket = TokenBucket(3, 10.0, clock=self.clock)

    def test_capacity(self):
        self.assertEqual([True, True, True, False], [self.bucket.allow("a") for __ in range(4)])
        self.assertTrue(self.bucket.allow("b"))
        self.assertEqual(0, self.bucket.remaining("a"))
        self.assertEqual(2, self.bucket.remaining("b"))

    def test_sliding_window(self):
        for at in (0.0, 4.0, 8.0):
            self.clock.now = at
            self.assertTrue(self.bucket.allow("a"))
        self.clock.now = 9.0
        self.assertFalse(self.bucket.allow("a"))
        self.assertEqual(1.0, self.bucket.retry_after("a"))
        self.clock.now = 10.0
        self.assertEqual(0.0, self.bucket.retry_after("a"))
        self.assertTrue(self.bucket.allow("a"))
        self.assertFalse(self.bucket.allow("a"))

    def test_at_most_capacity_per_window(self):
        grants = []
        for step in range(100):
            self.clock.now = step * 0.7
            if self.bucket.allow("a"):
                grants.append(self.clock.now)
        for index, start in enumerate(grants):
            inside = [at for at in grants[index:] if at < start + 10.0]
            self.assertLessEqual(len(inside), 3)

    def test_clients_forgotten(self):
        for index in range(1000):
            self.clock.now = index * 0.1
            self.assertTrue(self.bucket.allow("client-%d" % index))
        self.assertLessEqual(len(self.bucket), 101)
        self.clock.now = 200.0
        self.assertEqual(0, len(self.bucket))
        self.assertEqual(3, self.bucket.remaining("client-999"))

    def test_max_clients(self):
        bucket = TokenBucket(1, 10.0, clock=self.clock, max_clients=5)
        for index in range(20):
            bucket.allow(index)
        self.assertEqual(5, len(bucket))

    def test_invalid(self):
        with self.assertRaises(ValueError):
            TokenBucket(1, 0)
        self.assertFalse(TokenBucket(0, 1.0).allow("a"))


class TestService(MediaSealComponentCase):
    def setUp(self):
        super().setUp()
        self.publication = self.publish(photo_asset(1), watermark=True, register=True, seed=7)
        self.entry = self.publication.entry
        self.app = create_app(
            {"BACKEND": self.backend, "AUTH_TOKEN": TOKEN, "RATE_LIMIT": 2, "TESTING": True}
        )
        self.client = self.app.test_client()

    def exported(self, entry):
        with self.backend.work_on("registry.entry") as work:
            return work.component(usage="export.mapper").map_record(entry).values()

    def post(self, path, payload, token=None, **headers):
        if token:
            headers["Authorization"] = "Bearer %s" % token
        return self.client.post(path, data=canonical.dumps(payload), headers=headers, content_type="application/json")

    def asset_body(self, asset):
        return {"asset": base64.b64encode(serialize_asset(asset)).decode("ascii")}

    def test_lookup_by_hash(self):
        response = self.client.get("/entries/by-hash/%s" % self.entry.content_hash.hex())
        self.assertEqual(200, response.status_code)
        values = response.get_json()
        self.assertEqual("found", values["status"])
        self.assertEqual(self.exported(self.entry), values["entry"])
        self.assertTrue(canonical.is_canonical(response.data))
        response = self.client.get("/entries/by-hash/%s" % ("00" * 32))
        self.assertEqual({"entry": None, "status": "not_found"}, response.get_json())

    def test_lookup_bad_hash(self):
        for text in ("zz", "00" * 31, self.entry.content_hash.hex().upper()):
            self.assertEqual(400, self.client.get("/entries/by-hash/%s" % text).status_code)

    def test_lookup_by_watermark(self):
        response = self.client.get("/entries/by-watermark/%d" % self.entry.watermark_id)
        self.assertEqual("found", response.get_json()["status"])

    def test_lookup_by_fingerprint(self):
        fingerprint = compute_fingerprint(self.publication.asset.image)
        response = self.post("/entries/by-fingerprint", {"fingerprint": str(fingerprint)})
        values = response.get_json()
        self.assertEqual("found", values["status"])
        self.assertEqual(0, values["candidates"][0]["distance"])
        response = self.post("/entries/by-fingerprint", {"fingerprint": "blur:00", "tau": 3})
        self.assertEqual(400, response.status_code)
        response = self.post("/entries/by-fingerprint", {"fingerprint": str(fingerprint), "tau": -1})
        self.assertEqual(400, response.status_code)

    def test_store_needs_token(self):
        other = self.make_backend(data_dir=self.make_data_dir())
        entry = self.publish(photo_asset(2), register=True, backend=other).entry
        self.assertEqual(401, self.post("/entries", self.exported(entry)).status_code)
        self.assertEqual(401, self.post("/entries", self.exported(entry), token="nope").status_code)
        response = self.post("/entries", self.exported(entry), token=TOKEN)
        self.assertEqual(201, response.status_code)
        self.assertEqual({"content_hash": entry.content_hash.hex()}, response.get_json())
        self.assertEqual(2, len(self.backend.registry_store()))

    def test_store_duplicate_watermark_id(self):
        other = self.make_backend(data_dir=self.make_data_dir())
        entry = self.publish(
            photo_asset(2),
            watermark=True,
            watermark_id=self.entry.watermark_id,
            register=True,
            backend=other,
        ).entry
        response = self.post("/entries", self.exported(entry), token=TOKEN)
        self.assertEqual(409, response.status_code)
        self.assertIn("error", response.get_json())

    def test_store_malformed(self):
        values = dict(self.exported(self.entry), colour="red")
        self.assertEqual(400, self.post("/entries", values, token=TOKEN).status_code)
        response = self.client.post(
            "/entries", data=b"[1]", headers={"Authorization": "Bearer %s" % TOKEN}, content_type="application/json"
        )
        self.assertEqual(400, response.status_code)

    def test_closed_without_token(self):
        app = create_app({"BACKEND": self.backend, "TESTING": True})
        response = app.test_client().post("/faults", json={}, headers={"Authorization": "Bearer "})
        self.assertEqual(401, response.status_code)

    def test_faults(self):
        response = self.post("/faults", {"watermark_lookup": "no_access"}, token=TOKEN)
        self.assertEqual("no_access", response.get_json()["watermark_lookup"])
        response = self.client.get("/entries/by-watermark/%d" % self.entry.watermark_id)
        self.assertEqual({"entry": None, "status": "no_access"}, response.get_json())
        response = self.post("/faults", {"watermark_lookup": "slow"}, token=TOKEN)
        self.assertEqual(400, response.status_code)

    def test_trust_list(self):
        response = self.client.get("/trustlist")
        self.assertEqual(self.trust, trust_model.load_trust_list(response.data))

    def test_public_detect(self):
        response = self.post("/detect", self.asset_body(self.publication.asset), **{"X-Client-Id": "a"})
        self.assertEqual({"watermark": "detected"}, response.get_json())
        response = self.post("/detect", self.asset_body(photo_asset(2)), **{"X-Client-Id": "a"})
        self.assertEqual({"watermark": "undetectable"}, response.get_json())
        response = self.post("/detect", self.asset_body(photo_asset(2)), **{"X-Client-Id": "a"})
        self.assertEqual(429, response.status_code)
        self.assertGreaterEqual(int(response.headers["Retry-After"]), 1)
        response = self.post("/detect", self.asset_body(photo_asset(2)), **{"X-Client-Id": "b"})
        self.assertEqual(200, response.status_code)

    def test_detect_bad_asset(self):
        self.assertEqual(400, self.post("/detect", {"asset": "%%%"}).status_code)
        self.assertEqual(400, self.post("/detect", {"image": ""}).status_code)

    def test_internal_detect(self):
        body = self.asset_body(self.publication.asset)
        self.assertEqual(401, self.post("/internal/detect", body).status_code)
        values = self.post("/internal/detect", body, token=TOKEN).get_json()
        self.assertEqual(self.entry.watermark_id, values["payload_id"])
        self.assertIn("raw_bit_agreement", values)


class FakeResponse:
    def __init__(self, response):
        self.status_code = response.status_code
        self.content = response.data

    def json(self):
        return json.loads(self.content)


class TestRemoteAdapter(MediaSealComponentCase):
    """The remote adapter talking with the service through its test client"""

    def setUp(self):
        super().setUp()
        self.publication = self.publish(photo_asset(1), watermark=True, register=True, seed=7)
        app = create_app({"BACKEND": self.backend, "AUTH_TOKEN": TOKEN, "TESTING": True})
        self.client = app.test_client()
        patcher = mock.patch(
            "mediaseal.components.backend_adapter.requests.Session.request",
            side_effect=self.request,
        )
        patcher.start()
        self.addCleanup(patcher.stop)
        self.remote = self.make_backend(
            data_dir=None, registry_url="http://registry.test", auth_token=TOKEN
        )

    def request(self, method, url, data=None, headers=None, timeout=None):
        response = self.client.open(
            url[len("http://registry.test"):], method=method, data=data, headers=headers
        )
        return FakeResponse(response)

    def adapter(self):
        with self.remote.work_on("registry.entry") as work:
            return work.component(usage="backend.adapter")

    def test_lookups(self):
        entry = self.publication.entry
        self.assertEqual(entry, self.adapter().lookup_by_hash(entry.content_hash).entry)
        self.assertEqual(entry, self.adapter().lookup_by_watermark(entry.watermark_id).entry)
        outcome = self.adapter().lookup_by_fingerprint(compute_fingerprint(self.publication.asset.image))
        self.assertEqual(entry, outcome.entry)
        self.assertEqual("not_found", self.adapter().lookup_by_watermark(entry.watermark_id ^ 1).status)

    def test_store(self):
        other = self.make_backend(data_dir=self.make_data_dir())
        entry = self.publish(photo_asset(2), register=True, backend=other).entry
        self.adapter().store(entry)
        self.assertEqual(2, len(self.backend.registry_store()))

    def test_store_refused(self):
        other = self.make_backend(data_dir=self.make_data_dir())
        entry = self.publish(
            photo_asset(2),
            watermark=True,
            watermark_id=self.publication.entry.watermark_id,
            register=True,
            backend=other,
        ).entry
        with self.assertRaises(RegistryError):
            self.adapter().store(entry)

    def test_faults_and_validation(self):
        self.adapter().set_faults(FaultInjection(fingerprint_lookup="no_access"))
        with self.remote.work_on("media.asset") as work:
            report = work.component(usage="validator").validate(photo_asset(2), "full")
        self.assertEqual(("NotPresent", "Undetectable", "NoAccess"), report.triple)

    def test_pull_trust_list(self):
        self.backend.revoke_certificate("editor-1", 1700000000)
        with self.remote.work_on("trust.list") as work:
            trust = work.component(usage="backend.adapter").pull()
        self.assertEqual(self.backend.trust, trust)
        self.assertEqual(trust, self.remote.trust)

    def test_detect(self):
        data = serialize_asset(self.publication.asset)
        self.assertEqual({"watermark": "detected"}, self.adapter().detect(data))
        values = self.adapter().detect(data, internal=True)
        self.assertEqual(self.publication.entry.watermark_id, values["payload_id"])

    def test_unreachable_is_no_access(self):
        backend = self.make_backend(data_dir=None, registry_url="http://127.0.0.1:9", timeout=0.5)
        with mock.patch(
            "mediaseal.components.backend_adapter.requests.Session.request",
            side_effect=requests.ConnectionError("refused"),
        ):
            with backend.work_on("registry.entry") as work:
                adapter = work.component(usage="backend.adapter")
                self.assertEqual("no_access", adapter.lookup_by_watermark(1).status)
                with self.assertRaises(NetworkError):
                    adapter.store(self.publication.entry)
