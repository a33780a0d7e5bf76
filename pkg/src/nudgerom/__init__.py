# SPDX-FileCopyrightText: Copyright (c) 2024, NudgeROM Developers.
# All rights reserved.
# SPDX-License-Identifier: Apache-2.0
