# -*- coding: utf-8 -*-

# Copyright 2026 The wafflecert developers

# This program is free software: you can redistribute it and/or modify
# it under the terms of the GNU General Public License as published by
# the Free Software Foundation, either version 3 of the License, or
# (at your option) any later version.

# This program is distributed in the hope that it will be useful,
# but WITHOUT ANY WARRANTY; without even the implied warranty of
# MERCHANTABILITY or FITNESS FOR A PARTICULAR PURPOSE.  See the
# GNU General Public License for more details.

# You should have received a copy of the GNU General Public License
# along with this program.  If not, see <http://www.gnu.org/licenses/>.

"""
Roots of the exception hierarchy.

Every module declares the exceptions it raises next to the code raising them.
They derive from one of the two classes below, which lets the command line
entry point map a failure to its exit code without knowing every module.
"""


class PreconditionError(ValueError):
    """raised if input data or an operation's precondition is not satisfied"""


class ComputationError(RuntimeError):
    """raised if a computation could not be completed on valid input"""
