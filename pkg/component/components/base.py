# Copyright 2017 Camptocamp SA
# License LGPL-3.0 or later (http://www.gnu.org/licenses/lgpl.html)

from ..core import AbstractComponent


class BaseComponent(AbstractComponent):
    """Root of every component, ``base`` is inherited implicitly

    Shared helpers of a whole application belong to an abstract component
    inheriting from it (see ``base.mediaseal``).
    """

    _name = "base"
