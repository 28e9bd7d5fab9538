#include <stdio.h>

int main() {
    FILE *fp;
    char s[100];
    char c;
    int r;
    int i;
    int len;
    int first;
    int second;
    int count;
    count = 0;
    fp = fopen("words.txt", "r");
    r = fscanf(fp, "%c", &c);
    while (r == 1) {
        len = 0;
        while (r == 1 && c != ' ' && c != '\n' && c != '\t') {
            s[len] = c;
            len = len + 1;
            r = fscanf(fp, "%c", &c);
        }
        s[len] = '\0';
        i = 0;
        first = -1;
        second = -1;
        while (s[i] != '\0') {
            if (s[i] == 'p') {
                if (second == 1) {
                    count = count + 1;
                }
                first = 1;
                second = 0;
            } else if (s[i] == 'a') {
                if (first == 1) {
                    second = 1;
                } else {
                    second = 0;
                }
                first = 0;
            } else {
                first = 0;
                second = 0;
            }
            i = i + 1;
        }
        if (r == 1) {
            r = fscanf(fp, "%c", &c);
        }
    }
    printf("%d\n", count);
    return 0;
}
