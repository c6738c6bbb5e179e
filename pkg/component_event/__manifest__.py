# Copyright 2019 Camptocamp SA
# License LGPL-3.0 or later (http://www.gnu.org/licenses/lgpl.html)

{
    "name": "Components Events",
    "summary": "Notify events to listener components",
    "version": "1.0.0",
    "license": "LGPL-3",
    "depends": ["component"],
    "external_dependencies": {"python": ["cachetools"]},
    "installable": True,
}
