/**
 * Canonical graph texts as served by the backend (generated with the backend
 * renderer so the bytes match GET /models/{id}/graphs/{feature}/text).
 */

export const AGE_TEXT: string = "Feature Name: Age\n\nFeature Type: continuous\n\nMeans: {\"(2.0, 2.5)\": -0.308, \"(2.5, 3.5)\": 0.839, \"(3.5, 12.5)\": 0.91, \"(12.5, 17.5)\": 0.904, \"(17.5, 20.0)\": 0.035, \"(20.0, 21.5)\": 0.144, \"(21.5, 25.5)\": 0.304, \"(25.5, 28.5)\": 0.375, \"(28.5, 31.5)\": 0.254, \"(31.5, 33.5)\": 0.349, \"(33.5, 36.25)\": 0.399, \"(36.25, 36.75)\": 0.047, \"(36.75, 37.5)\": 0.038, \"(37.5, 38.5)\": 0.246, \"(38.5, 39.5)\": 0.2, \"(39.5, 41.0)\": 0.103, \"(41.0, 43.0)\": 0.086, \"(43.0, 44.5)\": -0.93, \"(44.5, 46.5)\": -1.153, \"(46.5, 47.5)\": -1.132, \"(47.5, 50.5)\": -0.301, \"(50.5, 51.5)\": 0.104, \"(51.5, 52.5)\": 0.121, \"(52.5, 53.5)\": 0.065, \"(53.5, 55.0)\": -0.637, \"(55.0, 56.5)\": -0.627, \"(56.5, 57.5)\": -0.648, \"(57.5, 60.5)\": -0.628, \"(60.5, 62.5)\": -0.977, \"(62.5, 67.5)\": -0.945, \"(67.5, 80.0)\": -0.887}\n\nLower Bounds (95%-Confidence Interval): {\"(2.0, 2.5)\": -2.464, \"(2.5, 3.5)\": -0.518, \"(3.5, 12.5)\": -0.303, \"(12.5, 17.5)\": -0.314, \"(17.5, 20.0)\": -0.405, \"(20.0, 21.5)\": -0.299, \"(21.5, 25.5)\": 0.097, \"(25.5, 28.5)\": -0.12, \"(28.5, 31.5)\": 0.11, \"(31.5, 33.5)\": 0.153, \"(33.5, 36.25)\": 0.132, \"(36.25, 36.75)\": -0.329, \"(36.75, 37.5)\": -0.321, \"(37.5, 38.5)\": -0.285, \"(38.5, 39.5)\": -0.36, \"(39.5, 41.0)\": -0.514, \"(41.0, 43.0)\": -0.467, \"(43.0, 44.5)\": -2.148, \"(44.5, 46.5)\": -2.244, \"(46.5, 47.5)\": -2.242, \"(47.5, 50.5)\": -0.49, \"(50.5, 51.5)\": -0.522, \"(51.5, 52.5)\": -0.483, \"(52.5, 53.5)\": -0.59, \"(53.5, 55.0)\": -1.135, \"(55.0, 56.5)\": -1.135, \"(56.5, 57.5)\": -1.186, \"(57.5, 60.5)\": -1.165, \"(60.5, 62.5)\": -1.889, \"(62.5, 67.5)\": -1.804, \"(67.5, 80.0)\": -1.604}\n\nUpper Bounds (95%-Confidence Interval): {\"(2.0, 2.5)\": 1.848, \"(2.5, 3.5)\": 2.196, \"(3.5, 12.5)\": 2.123, \"(12.5, 17.5)\": 2.122, \"(17.5, 20.0)\": 0.475, \"(20.0, 21.5)\": 0.588, \"(21.5, 25.5)\": 0.511, \"(25.5, 28.5)\": 0.869, \"(28.5, 31.5)\": 0.399, \"(31.5, 33.5)\": 0.544, \"(33.5, 36.25)\": 0.665, \"(36.25, 36.75)\": 0.423, \"(36.75, 37.5)\": 0.396, \"(37.5, 38.5)\": 0.778, \"(38.5, 39.5)\": 0.759, \"(39.5, 41.0)\": 0.72, \"(41.0, 43.0)\": 0.639, \"(43.0, 44.5)\": 0.288, \"(44.5, 46.5)\": -0.061, \"(46.5, 47.5)\": -0.023, \"(47.5, 50.5)\": -0.112, \"(50.5, 51.5)\": 0.73, \"(51.5, 52.5)\": 0.725, \"(52.5, 53.5)\": 0.719, \"(53.5, 55.0)\": -0.14, \"(55.0, 56.5)\": -0.118, \"(56.5, 57.5)\": -0.111, \"(57.5, 60.5)\": -0.09, \"(60.5, 62.5)\": -0.065, \"(62.5, 67.5)\": -0.087, \"(67.5, 80.0)\": -0.169}";

export const AGE_TEXT_INVERTED: string = "Feature Name: Age\n\nFeature Type: continuous\n\nMeans: {\"(2.0, 2.5)\": 0.308, \"(2.5, 3.5)\": -0.839, \"(3.5, 12.5)\": -0.91, \"(12.5, 17.5)\": -0.904, \"(17.5, 20.0)\": -0.035, \"(20.0, 21.5)\": -0.144, \"(21.5, 25.5)\": -0.304, \"(25.5, 28.5)\": -0.375, \"(28.5, 31.5)\": -0.254, \"(31.5, 33.5)\": -0.349, \"(33.5, 36.25)\": -0.399, \"(36.25, 36.75)\": -0.047, \"(36.75, 37.5)\": -0.038, \"(37.5, 38.5)\": -0.246, \"(38.5, 39.5)\": -0.2, \"(39.5, 41.0)\": -0.103, \"(41.0, 43.0)\": -0.086, \"(43.0, 44.5)\": 0.93, \"(44.5, 46.5)\": 1.153, \"(46.5, 47.5)\": 1.132, \"(47.5, 50.5)\": 0.301, \"(50.5, 51.5)\": -0.104, \"(51.5, 52.5)\": -0.121, \"(52.5, 53.5)\": -0.065, \"(53.5, 55.0)\": 0.637, \"(55.0, 56.5)\": 0.627, \"(56.5, 57.5)\": 0.648, \"(57.5, 60.5)\": 0.628, \"(60.5, 62.5)\": 0.977, \"(62.5, 67.5)\": 0.945, \"(67.5, 80.0)\": 0.887}\n\nLower Bounds (95%-Confidence Interval): {\"(2.0, 2.5)\": -1.848, \"(2.5, 3.5)\": -2.196, \"(3.5, 12.5)\": -2.123, \"(12.5, 17.5)\": -2.122, \"(17.5, 20.0)\": -0.475, \"(20.0, 21.5)\": -0.588, \"(21.5, 25.5)\": -0.511, \"(25.5, 28.5)\": -0.869, \"(28.5, 31.5)\": -0.399, \"(31.5, 33.5)\": -0.544, \"(33.5, 36.25)\": -0.665, \"(36.25, 36.75)\": -0.423, \"(36.75, 37.5)\": -0.396, \"(37.5, 38.5)\": -0.778, \"(38.5, 39.5)\": -0.759, \"(39.5, 41.0)\": -0.72, \"(41.0, 43.0)\": -0.639, \"(43.0, 44.5)\": -0.288, \"(44.5, 46.5)\": 0.061, \"(46.5, 47.5)\": 0.023, \"(47.5, 50.5)\": 0.112, \"(50.5, 51.5)\": -0.73, \"(51.5, 52.5)\": -0.725, \"(52.5, 53.5)\": -0.719, \"(53.5, 55.0)\": 0.14, \"(55.0, 56.5)\": 0.118, \"(56.5, 57.5)\": 0.111, \"(57.5, 60.5)\": 0.09, \"(60.5, 62.5)\": 0.065, \"(62.5, 67.5)\": 0.087, \"(67.5, 80.0)\": 0.169}\n\nUpper Bounds (95%-Confidence Interval): {\"(2.0, 2.5)\": 2.464, \"(2.5, 3.5)\": 0.518, \"(3.5, 12.5)\": 0.303, \"(12.5, 17.5)\": 0.314, \"(17.5, 20.0)\": 0.405, \"(20.0, 21.5)\": 0.299, \"(21.5, 25.5)\": -0.097, \"(25.5, 28.5)\": 0.12, \"(28.5, 31.5)\": -0.11, \"(31.5, 33.5)\": -0.153, \"(33.5, 36.25)\": -0.132, \"(36.25, 36.75)\": 0.329, \"(36.75, 37.5)\": 0.321, \"(37.5, 38.5)\": 0.285, \"(38.5, 39.5)\": 0.36, \"(39.5, 41.0)\": 0.514, \"(41.0, 43.0)\": 0.467, \"(43.0, 44.5)\": 2.148, \"(44.5, 46.5)\": 2.244, \"(46.5, 47.5)\": 2.242, \"(47.5, 50.5)\": 0.49, \"(50.5, 51.5)\": 0.522, \"(51.5, 52.5)\": 0.483, \"(52.5, 53.5)\": 0.59, \"(53.5, 55.0)\": 1.135, \"(55.0, 56.5)\": 1.135, \"(56.5, 57.5)\": 1.186, \"(57.5, 60.5)\": 1.165, \"(60.5, 62.5)\": 1.889, \"(62.5, 67.5)\": 1.804, \"(67.5, 80.0)\": 1.604}";

export const SEX_TEXT: string = "Feature Name: Sex\n\nFeature Type: categorical\n\nMeans: {\"female\": 1.397, \"male\": -1.397}\n\nLower Bounds (95%-Confidence Interval): {\"female\": 1.1, \"male\": -1.7}\n\nUpper Bounds (95%-Confidence Interval): {\"female\": 1.7, \"male\": -1.1}";

export const SEX_TEXT_SWAPPED: string = "Feature Name: Sex\n\nFeature Type: categorical\n\nMeans: {\"female\": -1.397, \"male\": 1.397}\n\nLower Bounds (95%-Confidence Interval): {\"female\": -1.7, \"male\": 1.1}\n\nUpper Bounds (95%-Confidence Interval): {\"female\": -1.1, \"male\": 1.7}";
