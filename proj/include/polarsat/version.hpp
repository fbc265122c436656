#pragma once

#define POLARSAT_VERSION "0.1.0"
