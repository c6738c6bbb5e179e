# Copyright 2017 Camptocamp SA
# License LGPL-3.0 or later (http://www.gnu.org/licenses/lgpl.html)

{
    "name": "Components",
    "summary": "Register and use decoupled components assembled by inheritance",
    "version": "1.0.0",
    "license": "LGPL-3",
    "depends": [],
    "external_dependencies": {
        "python": [
            "cachetools",
        ]
    },
    "installable": True,
}
