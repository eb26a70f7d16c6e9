#pragma once

#define FBMWALK_VERSION "1.0.0"
