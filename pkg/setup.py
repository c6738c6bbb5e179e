import ast
import os

import setuptools

ADDONS = ["component", "component_event", "mediaseal"]


def manifest(addon):
    with open(os.path.join(addon, "__manifest__.py"), "r") as f:
        return ast.literal_eval(f.read())


def external_dependencies():
    requirements = []
    for addon in ADDONS:
        for name in manifest(addon).get("external_dependencies", {}).get("python", []):
            if name not in requirements:
                requirements.append(name)
    return sorted(requirements)


setuptools.setup(
    name="mediaseal",
    description=manifest("mediaseal")["summary"],
    version=manifest("mediaseal")["version"],
    license="LGPL-3.0-or-later",
    packages=setuptools.find_packages(
        include=[pattern for addon in ADDONS for pattern in (addon, addon + ".*")]
    ),
    package_data={
        "mediaseal": ["data/*.csv"],
    },
    python_requires=">=3.9",
    install_requires=external_dependencies(),
    entry_points={"console_scripts": ["mediaseal = mediaseal.cli:main"]},
    classifiers=[
        "Programming Language :: Python",
        "Programming Language :: Python :: 3",
        "License :: OSI Approved :: GNU Lesser General Public License v3 or later (LGPLv3+)",
    ],
)
