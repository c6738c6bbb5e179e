# Copyright 2026 MediaSeal contributors
# License LGPL-3.0 or later (http://www.gnu.org/licenses/lgpl.html)

{
    "name": "MediaSeal",
    "summary": "Signed manifests, watermarks and fingerprints to validate media",
    "version": "1.0.0",
    "license": "LGPL-3",
    "depends": ["component", "component_event"],
    "external_dependencies": {
        "python": [
            "cachetools",
            "numpy",
            "scipy",
            "cryptography",
            "flask",
            "requests",
        ]
    },
    "installable": True,
}
