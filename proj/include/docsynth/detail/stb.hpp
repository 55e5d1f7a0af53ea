#pragma once

// stb declarations only; the implementations live in src/stb.cpp.

#include <stb_image.h>
#include <stb_image_write.h>
#include <stb_truetype.h>
