# SPDX-FileCopyrightText: Copyright (c) 2024, NudgeROM Developers.
# All rights reserved.
# SPDX-License-Identifier: Apache-2.0


from nudgerom.util.exception_handlers.schemas import schema_exception_handler


@schema_exception_handler
def validate_schema(metadata, Schema):
    return Schema(**metadata)
