# Copyright 2026 MediaSeal contributors
# License LGPL-3.0 or later (http://www.gnu.org/licenses/lgpl.html)

import io
import json
import os
import tempfile
import unittest
from unittest import mock

from ..cli import EXIT_IO, EXIT_REFUSED, EXIT_USAGE, main


class TestCommandLine(unittest.TestCase):
    """A signing and validation session driven through ``main``"""

    def setUp(self):
        super().setUp()
        directory = tempfile.TemporaryDirectory()
        self.addCleanup(directory.cleanup)
        self.dir = directory.name
        self.trust_list = self.path("trust.json")
        for argv in (
            ("--seed", "1", "trust", "issue", "camera-1", "--owner", "Camera Co",
             "--security-level", "device_secure", "--key-output", self.path("camera.pem")),
            ("--seed", "3", "watermark", "keygen", "-o", self.path("wm.key")),
            ("--seed", "2", "asset", "-o", self.path("photo.miac")),
        ):
            self.assertEqual(0, self.run_cli(*argv)[0], self.stderr)

    def path(self, name):
        return os.path.join(self.dir, name)

    def run_cli(self, *argv):
        options = ["--trust-list", self.trust_list, "--watermark-key", self.path("wm.key")]
        if not os.path.exists(self.path("wm.key")):
            options = options[:2]
        options += ["--data-dir", self.path("registry")]
        with mock.patch("sys.stdout", new_callable=io.StringIO) as stdout, mock.patch(
            "sys.stderr", new_callable=io.StringIO
        ) as stderr:
            code = main(options + list(argv))
        self.stderr = stderr.getvalue()
        return code, stdout.getvalue()

    def run_json(self, *argv):
        code, output = self.run_cli("--format", "json", *argv)
        self.assertEqual(0, code, self.stderr)
        return json.loads(output)

    def sign(self, *extra):
        return self.run_json(
            "--seed", "5", "sign", self.path("photo.miac"), "-o", self.path("signed.miac"),
            "--cert", "camera-1", "--key", self.path("camera.pem"),
            "--assertion", "camera_captured", "--watermark", "--register", *extra
        )

    def test_sign_and_verify(self):
        signed = self.sign()
        self.assertTrue(signed["registered"])
        self.assertIsNotNone(signed["watermark_id"])
        report = self.run_json("verify", self.path("signed.miac"))
        self.assertEqual("Media Validates", report["result"])
        self.assertEqual("High", report["confidence"])
        self.assertEqual("Camera Co", report["display"]["signer"])
        report = self.run_json("verify", "--mode", "full", self.path("signed.miac"))
        self.assertEqual(45, report["row"])

    def test_human_report(self):
        self.sign()
        code, output = self.run_cli("verify", self.path("signed.miac"))
        self.assertEqual(0, code)
        lines = output.splitlines()
        self.assertEqual("Media Validates / High", lines[0])
        self.assertIn("Signer: Camera Co (from the manifest)", lines)
        self.assertIn("Assertion: camera_captured", lines)

    def test_unknown_asset_is_not_an_error(self):
        report = self.run_json("verify", self.path("photo.miac"))
        self.assertEqual("Indeterminate", report["result"])

    def test_strip_attack(self):
        self.sign()
        code, __ = self.run_cli("attack", "strip_manifest", self.path("signed.miac"), "-o", self.path("stripped.miac"))
        self.assertEqual(0, code, self.stderr)
        report = self.run_json("verify", self.path("stripped.miac"))
        self.assertEqual("NotPresent", report["c2pa"]["state"])
        self.assertEqual("Det/Match", report["watermark"]["label"])
        self.assertEqual("Match", report["result"])

    def test_attack_parameters(self):
        code, __ = self.run_cli(
            "--seed", "1", "attack", "forge-perceptible-mark", self.path("photo.miac"),
            "-o", self.path("stamped.miac"), "--param", "text=AI",
        )
        self.assertEqual(0, code, self.stderr)
        self.assertTrue(os.path.exists(self.path("stamped.miac")))

    def test_revoke(self):
        self.sign()
        self.assertEqual(0, self.run_cli("trust", "revoke", "camera-1", "--at", "1700000100")[0])
        trust = self.run_json("trust", "show")
        self.assertEqual(2, trust["version"])
        report = self.run_json("verify", self.path("signed.miac"))
        self.assertEqual("NotPresent", report["c2pa"]["state"])
        self.assertIn("revoked", report["c2pa"]["concerns"])

    def test_watermark_detect(self):
        signed = self.sign()
        values = self.run_json("watermark", "detect", self.path("signed.miac"))
        self.assertEqual(signed["watermark_id"], values["payload_id"])

    def test_fingerprint(self):
        self.sign()
        values = self.run_json("fingerprint", "compute", self.path("signed.miac"))
        self.assertTrue(values["fingerprint"].startswith("block_mean:"))
        values = self.run_json("fingerprint", "match", self.path("signed.miac"))
        self.assertEqual("valid_match", values["status"])
        self.assertEqual(0, values["distance"])

    def test_registry_store(self):
        code, __ = self.run_cli(
            "sign", self.path("photo.miac"), "-o", self.path("signed.miac"),
            "--cert", "camera-1", "--key", self.path("camera.pem"),
        )
        self.assertEqual(0, code, self.stderr)
        values = self.run_json("registry", "store", self.path("signed.miac"))
        self.assertIsNone(values["watermark_id"])
        self.assertEqual(EXIT_REFUSED, self.run_cli("registry", "store", self.path("photo.miac"))[0])

    def test_oracle(self):
        values = self.run_json(
            "attack", "oracle-sim", "--endpoint", "internal_confidence", "--budget", "5"
        )
        self.assertEqual(1, len(values))
        self.assertEqual(5, values[0]["queries"])

    def test_usage_errors(self):
        with self.assertRaises(SystemExit) as caught:
            self.run_cli()
        self.assertEqual(EXIT_USAGE, caught.exception.code)
        with self.assertRaises(SystemExit) as caught:
            self.run_cli("--registry", "http://localhost:1", "verify", self.path("photo.miac"))
        self.assertEqual(EXIT_USAGE, caught.exception.code)
        self.assertEqual(EXIT_USAGE, self.run_cli("attack", "teleport", self.path("photo.miac"))[0])
        self.assertEqual(EXIT_USAGE, self.run_cli("attack", "strip_manifest")[0])
        self.assertEqual(
            EXIT_USAGE,
            self.run_cli("attack", "remove_watermark", self.path("photo.miac"), "-o",
                         self.path("x.miac"), "--param", "sigma")[0],
        )

    def test_refused_input(self):
        with open(self.path("garbage.miac"), "wb") as garbage:
            garbage.write(b"not an asset")
        self.assertEqual(EXIT_REFUSED, self.run_cli("verify", self.path("garbage.miac"))[0])
        self.assertIn("refused", self.stderr)

    def test_io_error(self):
        self.assertEqual(EXIT_IO, self.run_cli("verify", self.path("missing.miac"))[0])
