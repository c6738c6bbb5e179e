# Copyright 2026 MediaSeal contributors
# License LGPL-3.0 or later (http://www.gnu.org/licenses/lgpl.html)

"""
Command Line
============

``mediaseal [global flags] <command> ...``

Exit codes: 0 success (whatever the validation result), 1 usage error,
2 refused input, 3 I/O or registry error.

"""

import argparse
import json
import logging
import os
import sys
import time

from .components.attack import attack_names, run_attack
from .components.scenario import SCENARIO_NAMES, run_scenario, run_scenarios, scene_image
from .components.validator import SEQUENTIAL, WATERMARK_ONLY
from .exception import (
    MappingError,
    MediaSealException,
    MissingContext,
    RegistryError,
    UnknownAttack,
    ValidationError,
)
from .models import canonical
from .models import trust as trust_model
from .models.backend import MediaSealBackend, load_components
from .models.container import MediaAsset, parse_asset, serialize_asset
from .models.fingerprint import ALGORITHMS, BLOCK_MEAN, DEFAULT_TAU, compute_fingerprint
from .models.manifest import ACTION_KINDS, Action, EditRegion, extract_manifest
from .models.outcome import MODES, SHORT_CIRCUIT
from .models.scenario import AttackSpec
from .models.watermark import MODES as WATERMARK_MODES
from .models.watermark import WatermarkKey, WatermarkPayload, decode_watermark, embed_watermark
from .oracle import ENDPOINTS, oracle_attack_simulation
from .registry.store import FAULT_MODES, NORMAL, FaultInjection
from .validation import validate

_logger = logging.getLogger(__name__)

EXIT_USAGE = 1
EXIT_REFUSED = 2
EXIT_IO = 3

AUTH_TOKEN_VARIABLE = "MEDIASEAL_AUTH_TOKEN"


class UsageError(Exception):
    pass


class ArgumentParser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        self.exit(EXIT_USAGE, "%s: error: %s\n" % (self.prog, message))


# input / output


def _read(path):
    with open(path, "rb") as source:
        return source.read()


def _write(path, data):
    with open(path, "wb") as target:
        target.write(data)


def _read_asset(path):
    return parse_asset(_read(path))


def _emit(args, values, human):
    """Print ``values`` as canonical JSON or the ``human`` lines"""
    if args.format == "json":
        sys.stdout.write(canonical.dumps(values).decode("utf-8") + "\n")
    else:
        sys.stdout.write("\n".join(human) + "\n")


def _backend(args):
    trust = None
    if args.trust_list and os.path.exists(args.trust_list):
        trust = trust_model.load_trust_list(_read(args.trust_list))
    key = None
    if args.watermark_key:
        key = WatermarkKey.from_bytes(_read(args.watermark_key))
    return MediaSealBackend(
        trust=trust,
        watermark_key=key,
        data_dir=args.data_dir,
        registry_url=args.registry,
        auth_token=os.environ.get(AUTH_TOKEN_VARIABLE),
        tau=args.tau,
        fingerprint_algorithm=args.algorithm,
        components_registry=load_components(),
    )


def _parameter(text):
    name, sep, value = text.partition("=")
    if not sep or not name:
        raise UsageError("parameters read name=value, got %r" % text)
    try:
        return name, json.loads(value)
    except ValueError:
        return name, value


def _action(text):
    """kind[@left,top,right,bottom]"""
    kind, __, box = text.partition("@")
    if kind not in ACTION_KINDS:
        raise UsageError("unknown action %r" % kind)
    region = None
    if box:
        try:
            region = EditRegion(*(int(value) for value in box.split(",")))
        except (TypeError, ValueError) as exc:
            raise UsageError("regions read left,top,right,bottom") from exc
    return Action(kind, tool="mediaseal", timestamp=int(time.time()), region=region)


# human rendering


def _report_lines(report):
    lines = ["%s / %s" % (report.result, report.confidence)]
    if report.row is not None:
        lines.append("Row: %d" % report.row)
    if report.extra_tabular:
        lines.append("Extra-tabular decision")
    lines.append(
        "Stages: c2pa=%s watermark=%s fingerprint=%s"
        % tuple(label or "skipped" for label in report.triple)
    )
    if report.needs_human_review:
        lines.append("Needs human review")
    for concern in report.concerns:
        lines.append("Concern: %s" % concern)
    display = report.display
    if display is not None:
        lines.append("Signer: %s (from the %s)" % (display.signer, display.source))
        lines.append("Security level: %s" % display.security_level)
        if display.low_security_caveat:
            lines.append("Caveat: signed on a low security device")
        for assertion in display.assertions:
            lines.append("Assertion: %s" % assertion)
        for action in display.actions:
            region = action["region"]
            where = ""
            if region:
                where = " region %(left)d,%(top)d,%(right)d,%(bottom)d" % region
            lines.append("Action: %s (%s)%s" % (action["kind"], action["tool"], where))
        for thumbnail in display.ingredient_thumbnails:
            lines.append("Ingredient thumbnail: %s" % thumbnail)
    return lines


def _scenario_lines(result):
    lines = ["%s: mitigated=%s" % (result.scenario, "yes" if result.mitigated else "no")]
    before = result.report_before
    if before is not None:
        lines.append("  before: %s / %s" % (before.result, before.confidence))
    lines.append(
        "  after: %s / %s" % (result.report_after.result, result.report_after.confidence)
    )
    for name, variant in result.variants:
        lines.append(
            "  %s: mitigated=%s (%s / %s)"
            % (
                name,
                "yes" if variant.mitigated else "no",
                variant.report_after.result,
                variant.report_after.confidence,
            )
        )
    return lines


# commands


def cmd_asset(args):
    asset = MediaAsset(scene_image(args.seed, size=args.size, channels=args.channels))
    _write(args.output, serialize_asset(asset))


def cmd_sign(args):
    backend = _backend(args)
    asset = _read_asset(args.input)
    signing_key = trust_model.load_private_key(_read(args.key))
    with backend.work_on("media.asset") as work:
        publication = work.component(usage="record.exporter").run(
            asset,
            signing_key,
            args.cert,
            assertions=args.assertion,
            actions=[_action(text) for text in args.action],
            security_level=args.security_level,
            watermark=args.watermark,
            watermark_id=args.watermark_id,
            register=args.register,
            seed=args.seed,
        )
    _write(args.output, serialize_asset(publication.asset))
    manifest = publication.signed_manifest.manifest
    _emit(
        args,
        {
            "content_hash": manifest.content_hash.hex(),
            "registered": publication.entry is not None,
            "watermark_id": manifest.watermark_id,
        },
        ["Signed %s" % manifest.content_hash.hex()]
        + (["Watermark id: %d" % manifest.watermark_id] if manifest.watermark_id is not None else [])
        + (["Registered"] if publication.entry is not None else []),
    )


def cmd_verify(args):
    backend = _backend(args)
    report = validate(backend, _read_asset(args.input), mode=args.mode, kind=args.kind)
    _emit(args, report.to_dict(), _report_lines(report))


def cmd_watermark_keygen(args):
    key = WatermarkKey.generate(mode=args.mode, seed=args.seed)
    _write(args.output, key.to_bytes())


def _watermark_key(backend):
    if backend.watermark_key is None:
        raise UsageError("--watermark-key is required")
    return backend.watermark_key


def cmd_watermark_embed(args):
    backend = _backend(args)
    asset = _read_asset(args.input)
    image = embed_watermark(asset.image, WatermarkPayload(args.id), _watermark_key(backend))
    _write(args.output, serialize_asset(asset.with_image(image)))


def cmd_watermark_detect(args):
    backend = _backend(args)
    if backend.registry_url:
        with backend.work_on("registry.entry") as work:
            payload = work.component(usage="backend.adapter").detect(
                _read(args.input), internal=args.internal
            )
        _emit(args, payload, ["%s: %s" % item for item in sorted(payload.items())])
        return
    result = decode_watermark(_read_asset(args.input).image, _watermark_key(backend))
    lines = [result.status]
    if result.detected:
        lines.append("Watermark id: %d" % result.payload.id)
    _emit(args, result.to_dict(), lines)


def cmd_fingerprint_compute(args):
    fingerprint = compute_fingerprint(_read_asset(args.input).image, args.algorithm)
    _emit(args, {"fingerprint": str(fingerprint)}, [str(fingerprint)])


def cmd_fingerprint_match(args):
    backend = _backend(args)
    with backend.work_on("media.asset") as work:
        match, fingerprint, entry = work.component(usage="fingerprint.checker").match(
            _read_asset(args.input)
        )
    values = {
        "distance": match.distance,
        "fingerprint": str(fingerprint) if fingerprint is not None else None,
        "needs_human_review": match.needs_human_review,
        "registry_hash": entry.content_hash.hex() if entry is not None else None,
        "status": match.status,
    }
    lines = ["%s: %s" % (name, value) for name, value in sorted(values.items())]
    _emit(args, values, lines)


def cmd_attack(args):
    backend = _backend(args)
    seed = args.seed if args.seed is not None else 0
    name = args.name.replace("-", "_")
    if args.name == "scenario-all":
        with backend.work_on("scenario.result") as work:
            results = run_scenarios(work, seed=seed)
        _emit(
            args,
            [result.to_dict() for result in results],
            [line for result in results for line in _scenario_lines(result)],
        )
        return
    if args.name in SCENARIO_NAMES:
        with backend.work_on("scenario.result") as work:
            result = run_scenario(work, args.name, seed=seed)
        _emit(args, result.to_dict(), _scenario_lines(result))
        return
    if args.name == "oracle-sim":
        endpoints = [args.endpoint] if args.endpoint else list(ENDPOINTS)
        results = [
            oracle_attack_simulation(
                endpoint, seed=seed, budget=args.budget, rate_limit=args.rate_limit
            )
            for endpoint in endpoints
        ]
        _emit(
            args,
            [result.to_dict() for result in results],
            [
                "%s: %s after %d queries, %d windows"
                % (
                    result.endpoint,
                    "removed" if result.success else "budget exhausted",
                    result.queries,
                    result.windows,
                )
                for result in results
            ],
        )
        return
    with backend.work_on("media.asset") as work:
        if name not in attack_names(work):
            raise UnknownAttack("unknown attack %r" % args.name)
        if not args.input or not args.output:
            raise UsageError("attack %s needs an input and --output" % args.name)
        context = {}
        if args.source:
            context["source"] = _read_asset(args.source)
        if args.key:
            context["signing_key"] = trust_model.load_private_key(_read(args.key))
            context["certificate_id"] = args.cert
        spec = AttackSpec(name, dict(_parameter(text) for text in args.param), seed)
        attacked = run_attack(work, _read_asset(args.input), spec, **context)
    _write(args.output, serialize_asset(attacked))
    _emit(args, spec.to_dict(), ["%s applied" % args.name])


def cmd_registry_serve(args):
    from .registry.service import serve

    config = {
        "DATA_DIR": args.data_dir,
        "RATE_LIMIT": args.rate_limit,
        "RATE_WINDOW": args.rate_window,
        "AUTH_TOKEN": args.auth_token or os.environ.get(AUTH_TOKEN_VARIABLE),
    }
    if args.trust_list:
        config["TRUST_LIST"] = args.trust_list
    if args.watermark_key:
        config["WATERMARK_KEY"] = args.watermark_key
    serve(config, host=args.host, port=args.port)


def cmd_registry_store(args):
    backend = _backend(args)
    asset = _read_asset(args.input)
    signed = extract_manifest(asset)
    if signed is None:
        raise MissingContext("%s carries no manifest" % args.input)
    with backend.work_on("media.asset") as work:
        entry = work.component(usage="record.exporter").register(asset, signed)
    _emit(
        args,
        {"content_hash": entry.content_hash.hex(), "watermark_id": entry.watermark_id},
        ["Stored %s" % entry.content_hash.hex()],
    )


def cmd_registry_fault(args):
    backend = _backend(args)
    faults = FaultInjection(
        manifest_lookup=args.manifest_lookup,
        watermark_lookup=args.watermark_lookup,
        fingerprint_lookup=args.fingerprint_lookup,
    )
    with backend.work_on("registry.entry") as work:
        work.component(usage="backend.adapter").set_faults(faults)
    _emit(args, faults.to_dict(), ["%s: %s" % item for item in sorted(faults.to_dict().items())])


def _trust_list_path(args):
    if not args.trust_list:
        raise UsageError("--trust-list is required")
    return args.trust_list


def cmd_trust_show(args):
    backend = _backend(args)
    trust = backend.trust
    lines = ["Version %d" % trust.version]
    for record in trust:
        state = "revoked at %d" % record.revoked_at if record.revoked else "trusted"
        lines.append(
            "%s %s (%s) %s"
            % (record.certificate_id, record.owner_name, record.security_level, state)
        )
    _emit(args, canonical.loads(trust_model.save_trust_list(trust)), lines)


def cmd_trust_revoke(args):
    path = _trust_list_path(args)
    backend = _backend(args)
    record = backend.revoke_certificate(args.cert, args.at or int(time.time()))
    _write(path, trust_model.save_trust_list(backend.trust))
    _emit(args, record.to_dict(), ["%s revoked" % record.certificate_id])


def cmd_trust_issue(args):
    path = _trust_list_path(args)
    backend = _backend(args)
    key, record = trust_model.issue_certificate(
        args.cert, args.owner, args.security_level, seed=args.seed
    )
    trust = trust_model.add_certificate(backend.trust, record)
    _write(args.key_output, trust_model.private_key_to_pem(key))
    _write(path, trust_model.save_trust_list(trust))
    _emit(args, record.to_dict(), ["%s issued to %s" % (record.certificate_id, record.owner_name)])


def cmd_trust_pull(args):
    path = _trust_list_path(args)
    backend = _backend(args)
    with backend.work_on("trust.list") as work:
        trust = work.component(usage="backend.adapter").pull()
    _write(path, trust_model.save_trust_list(trust))
    _emit(args, {"version": trust.version}, ["Trust list version %d" % trust.version])


# parser


def build_parser():
    parser = ArgumentParser(prog="mediaseal", description="Media integrity toolkit")
    parser.add_argument("--format", choices=("human", "json"), default="human")
    location = parser.add_mutually_exclusive_group()
    location.add_argument("--registry", metavar="URL", help="registry service")
    location.add_argument("--data-dir", metavar="PATH", help="local registry")
    parser.add_argument("--seed", type=int, default=None)
    parser.add_argument("--trust-list", metavar="PATH")
    parser.add_argument("--watermark-key", metavar="PATH")
    parser.add_argument("--tau", type=int, default=DEFAULT_TAU)
    parser.add_argument("--algorithm", choices=ALGORITHMS, default=BLOCK_MEAN)
    parser.add_argument(
        "--log-level", default="WARNING", choices=("DEBUG", "INFO", "WARNING", "ERROR")
    )
    commands = parser.add_subparsers(dest="command", metavar="command", parser_class=ArgumentParser)
    commands.required = True

    asset = commands.add_parser("asset", help="create a synthetic asset")
    asset.add_argument("--output", "-o", required=True)
    asset.add_argument("--size", type=int, default=64)
    asset.add_argument("--channels", type=int, choices=(1, 3), default=3)
    asset.set_defaults(func=cmd_asset)

    sign = commands.add_parser("sign", help="sign an asset")
    sign.add_argument("input")
    sign.add_argument("--output", "-o", required=True)
    sign.add_argument("--cert", required=True, help="certificate id")
    sign.add_argument("--key", required=True, help="PEM signing key")
    sign.add_argument("--assertion", action="append", default=[])
    sign.add_argument(
        "--action", action="append", default=[], help="kind[@left,top,right,bottom]"
    )
    sign.add_argument("--security-level", choices=trust_model.SECURITY_LEVELS)
    sign.add_argument("--watermark", action="store_true")
    sign.add_argument("--watermark-id", type=int)
    sign.add_argument("--register", action="store_true")
    sign.set_defaults(func=cmd_sign)

    verify = commands.add_parser("verify", help="validate an asset")
    verify.add_argument("input")
    verify.add_argument("--mode", choices=MODES, default=SHORT_CIRCUIT)
    verify.add_argument("--kind", choices=(SEQUENTIAL, WATERMARK_ONLY), default=SEQUENTIAL)
    verify.set_defaults(func=cmd_verify)

    watermark = commands.add_parser("watermark", help="watermark keys and marks")
    watermark_commands = watermark.add_subparsers(
        dest="watermark_command", metavar="command", parser_class=ArgumentParser
    )
    watermark_commands.required = True
    keygen = watermark_commands.add_parser("keygen")
    keygen.add_argument("--output", "-o", required=True)
    keygen.add_argument("--mode", choices=WATERMARK_MODES, default=WATERMARK_MODES[0])
    keygen.set_defaults(func=cmd_watermark_keygen)
    embed = watermark_commands.add_parser("embed")
    embed.add_argument("input")
    embed.add_argument("--output", "-o", required=True)
    embed.add_argument("--id", type=int, required=True)
    embed.set_defaults(func=cmd_watermark_embed)
    detect = watermark_commands.add_parser("detect")
    detect.add_argument("input")
    detect.add_argument("--internal", action="store_true", help="full result, needs a token")
    detect.set_defaults(func=cmd_watermark_detect)

    fingerprint = commands.add_parser("fingerprint", help="perceptual fingerprints")
    fingerprint_commands = fingerprint.add_subparsers(
        dest="fingerprint_command", metavar="command", parser_class=ArgumentParser
    )
    fingerprint_commands.required = True
    compute = fingerprint_commands.add_parser("compute")
    compute.add_argument("input")
    compute.set_defaults(func=cmd_fingerprint_compute)
    match = fingerprint_commands.add_parser("match")
    match.add_argument("input")
    match.set_defaults(func=cmd_fingerprint_match)

    attack = commands.add_parser(
        "attack", help="attack an asset, or run scenario-1..3, scenario-all, oracle-sim"
    )
    attack.add_argument("name")
    attack.add_argument("input", nargs="?")
    attack.add_argument("--output", "-o")
    attack.add_argument("--param", action="append", default=[], help="name=value")
    attack.add_argument("--source", help="asset the attack copies from")
    attack.add_argument("--key", help="PEM signing key of the attacker")
    attack.add_argument("--cert", help="certificate id of the signing key")
    attack.add_argument("--endpoint", choices=ENDPOINTS)
    attack.add_argument("--budget", type=int, default=5000)
    attack.add_argument("--rate-limit", type=int, default=10)
    attack.set_defaults(func=cmd_attack)

    registry = commands.add_parser("registry", help="registry service and entries")
    registry_commands = registry.add_subparsers(
        dest="registry_command", metavar="command", parser_class=ArgumentParser
    )
    registry_commands.required = True
    serve = registry_commands.add_parser("serve")
    serve.add_argument("--host", default="127.0.0.1")
    serve.add_argument("--port", type=int, default=8080)
    serve.add_argument("--rate-limit", type=int, default=10)
    serve.add_argument("--rate-window", type=float, default=60.0)
    serve.add_argument("--auth-token")
    serve.set_defaults(func=cmd_registry_serve)
    store = registry_commands.add_parser("store")
    store.add_argument("input")
    store.set_defaults(func=cmd_registry_store)
    fault = registry_commands.add_parser("fault")
    for subsystem in ("manifest-lookup", "watermark-lookup", "fingerprint-lookup"):
        fault.add_argument("--" + subsystem, choices=FAULT_MODES, default=NORMAL)
    fault.set_defaults(func=cmd_registry_fault)

    trust = commands.add_parser("trust", help="trust list")
    trust_commands = trust.add_subparsers(
        dest="trust_command", metavar="command", parser_class=ArgumentParser
    )
    trust_commands.required = True
    show = trust_commands.add_parser("show")
    show.set_defaults(func=cmd_trust_show)
    revoke = trust_commands.add_parser("revoke")
    revoke.add_argument("cert")
    revoke.add_argument("--at", type=int, help="revocation time, now by default")
    revoke.set_defaults(func=cmd_trust_revoke)
    issue = trust_commands.add_parser("issue")
    issue.add_argument("cert")
    issue.add_argument("--owner", required=True)
    issue.add_argument(
        "--security-level", choices=trust_model.SECURITY_LEVELS, default="cloud_high"
    )
    issue.add_argument("--key-output", required=True, help="where to write the PEM key")
    issue.set_defaults(func=cmd_trust_issue)
    pull = trust_commands.add_parser("pull")
    pull.set_defaults(func=cmd_trust_pull)
    return parser


def main(argv=None):
    parser = build_parser()
    args = parser.parse_args(argv)
    logging.basicConfig(
        level=getattr(logging, args.log_level), format="%(levelname)s %(name)s: %(message)s"
    )
    try:
        args.func(args)
    except (UsageError, UnknownAttack) as exc:
        parser.print_usage(sys.stderr)
        sys.stderr.write("mediaseal: error: %s\n" % exc)
        return EXIT_USAGE
    except (ValidationError, MappingError) as exc:
        sys.stderr.write("mediaseal: refused: %s\n" % exc)
        return EXIT_REFUSED
    except (RegistryError, OSError) as exc:
        sys.stderr.write("mediaseal: %s\n" % exc)
        return EXIT_IO
    except MediaSealException as exc:
        sys.stderr.write("mediaseal: %s\n" % exc)
        return EXIT_REFUSED
    return 0


if __name__ == "__main__":
    sys.exit(main())
